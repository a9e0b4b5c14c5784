"""Hand-encoded rewrite systems and certificates used by tests, scripts and the CLI demo.

Each certificate function returns a fresh (unvalidated) ProofCert.
"""

from __future__ import annotations

from .proofs import CertBuilder, ProofCert
from .trs import FiniteReduction, Step, Trs, make_trs, with_symbols

# {C(a) -> a}: the collapsing system behind C^ω ↠ a.
TRS_COLLAPSE = make_trs([("C(a)", "a")])
# {a -> C(a)}: left-linear, used for compression of a ⟶∞ C^ω.
TRS_GROW = make_trs([("a", "C(a)")])
# {f(x,x) -> D, a -> C(a), b -> C(b)}: the non-left-linear system with f(a,b) ⟶∞ D.
TRS_DIAGONAL = make_trs([("f(x, x)", "D"), ("a", "C(a)"), ("b", "C(b)")])
# {f(x) -> g(x)}.
TRS_FG = make_trs([("f(x)", "g(x)")])
# {a -> f(a), b -> f(b), C(b) -> C(C(a))}: equational reasoning a =∞ b.
TRS_EQ = make_trs([("a", "f(a)"), ("b", "f(b)"), ("C(b)", "C(C(a))")])
# {c(b(x)) -> a(a(x)), c(a(x)) -> b(b(x))}: a^ω =∞ b^ω.
TRS_SWAP = make_trs([("c(b(x))", "a(a(x))"), ("c(a(x))", "b(b(x))")])
# {f(x) -> g(x), a -> C(a), b -> C(b)} plus a rule-free binary h for parallel positions.
TRS_PERM = with_symbols(make_trs([("f(x)", "g(x)"), ("a", "C(a)"), ("b", "C(b)")]), {"h": 2})
# {a(x) -> a(a(x)), b(x) -> b(b(x)), f(x,y) -> f(a(c), b(c))}: projection example.
TRS_PROJ = make_trs([("a(x)", "a(a(x))"), ("b(x)", "b(b(x))"), ("f(x, y)", "f(a(c), b(c))")])

C_OMEGA = "rec X . C(X)"


def _grow_loop(b: CertBuilder, const: str, rule: int, nid: str | None = None) -> str:
    """const ⟶∞ C^ω: split[root const -> C(const); unmarked lift looping back]."""
    top = nid or b.reserve()
    step = b.root(const, f"C({const})", rule)
    lift = b.lift(f"C({const})", C_OMEGA, [top])
    b.split(const, C_OMEGA, [step, lift], nid=top)
    return top


def a_to_c_omega(trs: Trs = TRS_GROW) -> ProofCert:
    """a ⟶∞ C^ω by one root step and a lift back to the root."""
    b = CertBuilder("ired", trs)
    rule = _rule_index(trs, "a", "C(a)")
    return b.build(_grow_loop(b, "a", rule))


def a_to_c_omega_unrolled(trs: Trs = TRS_GROW) -> ProofCert:
    """a ⟶∞ C^ω with the loop unrolled once (same infinite tree)."""
    b = CertBuilder("ired", trs)
    rule = _rule_index(trs, "a", "C(a)")
    inner = _grow_loop(b, "a", rule)
    step = b.root("a", "C(a)", rule)
    lift = b.lift("C(a)", C_OMEGA, [inner])
    return b.build(b.split("a", C_OMEGA, [step, lift]))


def a_to_c_omega_detour(trs: Trs = TRS_GROW) -> ProofCert:
    """A second proof of a ⟶∞ C^ω: the inner step sits under a marked lift."""
    b = CertBuilder("ired", trs)
    rule = _rule_index(trs, "a", "C(a)")
    loop = _grow_loop(b, "a", rule)
    inner = b.split("a", "C(a)", [b.root("a", "C(a)", rule), b.identity_lift("C(a)")])
    mid = b.lift("C(a)", "C(C(a))", [inner], marked=True)
    tail_child = b.split("C(a)", C_OMEGA, [b.lift("C(a)", C_OMEGA, [loop])])
    tail = b.lift("C(C(a))", C_OMEGA, [tail_child])
    return b.build(b.split("a", C_OMEGA, [b.root("a", "C(a)", rule), mid, tail]))


def fab_to_d(trs: Trs = TRS_DIAGONAL) -> ProofCert:
    """f(a,b) ⟶∞ D: a marked lift of two infinite argument reductions, then f(x,x) -> D."""
    b = CertBuilder("ired", trs)
    return b.build(_fab_to_d(b, trs))


def _fab_to_d(b: CertBuilder, trs: Trs) -> str:
    left = _grow_loop(b, "a", _rule_index(trs, "a", "C(a)"))
    right = _grow_loop(b, "b", _rule_index(trs, "b", "C(b)"))
    both = f"f({C_OMEGA}, {C_OMEGA})"
    lift = b.lift("f(a, b)", both, [left, right], marked=True)
    step = b.root(both, "D", _rule_index(trs, "f(x, x)", "D"))
    return b.split("f(a, b)", "D", [lift, step, b.identity_lift("D")])


def stacked_fab_to_d(trs: Trs = TRS_DIAGONAL) -> ProofCert:
    """f(f(a,b), f(a,b)) ⟶∞ D: two nested levels of marked lifts."""
    b = CertBuilder("ired", trs)
    inner = _fab_to_d(b, trs)
    lift = b.lift("f(f(a, b), f(a, b))", "f(D, D)", [inner, inner], marked=True)
    step = b.root("f(D, D)", "D", _rule_index(trs, "f(x, x)", "D"))
    return b.build(b.split("f(f(a, b), f(a, b))", "D", [lift, step, b.identity_lift("D")]))


F_OMEGA = "rec X . f(X)"
G_OMEGA = "rec X . g(X)"


def _f_to_g_loop(b: CertBuilder, rule: int) -> str:
    top = b.reserve()
    step = b.root(F_OMEGA, f"g({F_OMEGA})", rule)
    lift = b.lift(f"g({F_OMEGA})", G_OMEGA, [top])
    b.split(F_OMEGA, G_OMEGA, [step, lift], nid=top)
    return top


def f_omega_to_g_omega(trs: Trs = TRS_FG) -> ProofCert:
    """f^ω ⟶∞ g^ω by rewriting the root and lifting back."""
    b = CertBuilder("ired", trs)
    return b.build(_f_to_g_loop(b, 0))


def f_omega_to_g_omega_nested(trs: Trs = TRS_FG) -> ProofCert:
    """f^ω ⟶∞ g^ω alternating root steps with a marked inner step."""
    b = CertBuilder("ired", trs)
    loop = _f_to_g_loop(b, 0)
    g_f = f"g({F_OMEGA})"
    inner = b.split(F_OMEGA, g_f, [b.root(F_OMEGA, g_f, 0), b.identity_lift(g_f)])
    mark = b.lift(F_OMEGA, f"f({g_f})", [inner], marked=True)
    step = b.root(f"f({g_f})", f"g({g_f})", 0)
    tail_child = b.split(g_f, G_OMEGA, [b.lift(g_f, G_OMEGA, [loop])])
    tail = b.lift(f"g({g_f})", G_OMEGA, [tail_child])
    middle = b.split(F_OMEGA, G_OMEGA, [mark, step, tail])
    top = b.split(F_OMEGA, G_OMEGA, [b.root(F_OMEGA, g_f, 0), b.lift(g_f, G_OMEGA, [middle])])
    return b.build(top)


def _collapse_graph(kind: str, marked: bool, final_identity: bool, trs: Trs) -> ProofCert:
    b = CertBuilder(kind, trs)
    top = b.reserve()
    premises = [
        b.lift(C_OMEGA, "C(a)", [top], marked=marked),
        b.root("C(a)", "a", _rule_index(trs, "C(a)", "a")),
    ]
    if final_identity:
        premises.append(b.identity_lift("a"))
    b.split(C_OMEGA, "a", premises, nid=top)
    return b.build(top)


def c_omega_to_a(kind: str = "ibi", trs: Trs = TRS_COLLAPSE) -> ProofCert:
    """C^ω related to a: a lift looping to the root, C(a) -> a, then identity on a.

    As ired the first lift is non-final and hence marked, which puts a mark on
    a cycle; with the mark erased the same graph is a valid ibi certificate.
    """
    return _collapse_graph(kind, kind == "ired", True, trs)


def c_omega_eq_a(kind: str = "ieq", trs: Trs = TRS_COLLAPSE) -> ProofCert:
    """C^ω related to a by a looping lift followed by the root step C(a) -> a."""
    return _collapse_graph(kind, False, False, trs)


def a_eq_b(trs: Trs = TRS_EQ) -> ProofCert:
    """a =∞ b: a -> f(a), lift under f back to the goal, f(b) <- b."""
    b = CertBuilder("ieq", trs)
    return b.build(_a_eq_b(b, trs))


def _a_eq_b(b: CertBuilder, trs: Trs) -> str:
    fo = "rec X . f(X)"
    top = b.reserve()
    # a =∞ f^ω
    left = b.reserve()
    b.split("a", fo, [b.root("a", "f(a)", 0), b.lift("f(a)", fo, [left])], nid=left)
    # f^ω =∞ b
    right = b.reserve()
    b.split(fo, "b", [b.lift(fo, "f(b)", [right]), b.root("f(b)", "b", 1, reversed=True)], nid=right)
    premises = [
        b.root("a", "f(a)", 0),
        b.lift("f(a)", fo, [left]),
        b.lift(fo, "f(b)", [right]),
        b.root("f(b)", "b", 1, reversed=True),
    ]
    b.split("a", "b", premises, nid=top)
    return top


def ca_eq_c_omega(trs: Trs = TRS_EQ) -> ProofCert:
    """C(a) =∞ C^ω: lift a =∞ b under C, rewrite C(b), lift back."""
    b = CertBuilder("ieq", trs)
    ab = _a_eq_b(b, trs)
    top = b.reserve()
    premises = [
        b.lift("C(a)", "C(b)", [ab]),
        b.root("C(b)", "C(C(a))", 2),
        b.lift("C(C(a))", C_OMEGA, [top]),
    ]
    b.split("C(a)", C_OMEGA, premises, nid=top)
    return b.build(top)


A_OMEGA = "rec X . a(X)"
B_OMEGA = "rec X . b(X)"


def a_omega_eq_b_omega(trs: Trs = TRS_SWAP) -> ProofCert:
    """a^ω =∞ b^ω with its mirror image b^ω =∞ a^ω, each using the other."""
    b = CertBuilder("ieq", trs)
    fwd, bwd = b.reserve(), b.reserve()
    ao, bo = A_OMEGA, B_OMEGA

    def wrap(sym: str, src: str, tgt: str, child: str) -> str:
        return b.split(f"{sym}({src})", f"{sym}({tgt})", [b.lift(f"{sym}({src})", f"{sym}({tgt})", [child])])

    b.split(ao, bo, [
        b.root(ao, f"c(b({ao}))", 0, reversed=True),
        b.lift(f"c(b({ao}))", f"c(b({bo}))", [wrap("b", ao, bo, fwd)]),
        b.lift(f"c({bo})", f"c({ao})", [bwd]),
        b.lift(f"c(a({ao}))", f"c(a({bo}))", [wrap("a", ao, bo, fwd)]),
        b.root(f"c(a({bo}))", f"b(b({bo}))", 1),
    ], nid=fwd)
    b.split(bo, ao, [
        b.root(bo, f"c(a({bo}))", 1, reversed=True),
        b.lift(f"c(a({bo}))", f"c(a({ao}))", [wrap("a", bo, ao, bwd)]),
        b.lift(f"c({ao})", f"c({bo})", [fwd]),
        b.lift(f"c(b({bo}))", f"c(b({ao}))", [wrap("b", bo, ao, bwd)]),
        b.root(f"c(b({ao}))", f"a(a({ao}))", 0),
    ], nid=bwd)
    return b.build(fwd)


def two_by_two_lift(trs: Trs = TRS_PERM) -> ProofCert:
    """h(a,b) ⟶∞ h(C(C(a)), C(C(b))): one lift over two 2-step argument reductions."""
    b = CertBuilder("ired", trs)

    def twice(c: str, rule: int) -> str:
        inner = b.split(c, f"C({c})", [b.root(c, f"C({c})", rule), b.identity_lift(f"C({c})")])
        lift = b.lift(f"C({c})", f"C(C({c}))", [inner])
        return b.split(c, f"C(C({c}))", [b.root(c, f"C({c})", rule), lift])

    left = twice("a", _rule_index(trs, "a", "C(a)"))
    right = twice("b", _rule_index(trs, "b", "C(b)"))
    top = b.lift("h(a, b)", "h(C(C(a)), C(C(b)))", [left, right])
    return b.build(b.split("h(a, b)", "h(C(C(a)), C(C(b)))", [top]))


def id_over_constant(trs: Trs = TRS_GROW) -> ProofCert:
    """a ⟶∞ a by a bare Id premise (valid but not canonical)."""
    b = CertBuilder("ired", trs)
    return b.build(b.split("a", "a", [b.ident("a")]))


def projection_sequence(trs: Trs = TRS_PROJ) -> FiniteReduction:
    """Six steps from f(a(c), b(c)), with a root step in the middle."""
    rho1, rho2, rho3 = 0, 1, 2
    positions = [((1,), rho1), ((1,), rho1), ((2,), rho2), ((), rho3), ((2,), rho2), ((1,), rho1)]
    return FiniteReduction(trs.parse("f(a(c), b(c))"), tuple(Step(p, r) for p, r in positions))


def _rule_index(trs: Trs, lhs: str, rhs: str) -> int:
    want = (trs.parse(lhs), trs.parse(rhs))
    for i, r in enumerate(trs.rules):
        if (r.lhs, r.rhs) == want:
            return i
    raise KeyError(f"rule {lhs} -> {rhs} not in system")


def ired_fixtures() -> dict[str, tuple[Trs, ProofCert]]:
    """All valid ired fixtures, by name."""
    return {
        "a_to_c_omega": (TRS_GROW, a_to_c_omega()),
        "a_to_c_omega_unrolled": (TRS_GROW, a_to_c_omega_unrolled()),
        "a_to_c_omega_detour": (TRS_GROW, a_to_c_omega_detour()),
        "fab_to_d": (TRS_DIAGONAL, fab_to_d()),
        "stacked_fab_to_d": (TRS_DIAGONAL, stacked_fab_to_d()),
        "f_omega_to_g_omega": (TRS_FG, f_omega_to_g_omega()),
        "f_omega_to_g_omega_nested": (TRS_FG, f_omega_to_g_omega_nested()),
        "two_by_two_lift": (TRS_PERM, two_by_two_lift()),
        "id_over_constant": (TRS_GROW, id_over_constant()),
    }
