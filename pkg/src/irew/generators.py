"""Seeded random generators of valid certificates and sequences.

Certificates are built compositionally over ``TRS_PERM`` (f(x) -> g(x),
a -> C(a), b -> C(b), binary h): chains of root steps and marked lifts
closed by an unmarked lift or Id, with cyclic pieces (a ⟶∞ C^ω,
f^ω ⟶∞ g^ω) spliced in at the leaves. Every returned certificate has
passed check_valid.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .fixtures import C_OMEGA, F_OMEGA, G_OMEGA, TRS_PERM
from .proofs import CertBuilder, ProofCert, check_valid
from .terms import FUN, Term
from .trs import FiniteReduction, Step, Trs, apply_step, redexes_to_depth


@dataclass(frozen=True)
class CertGenConfig:
    max_nodes: int = 12
    max_depth: int = 3
    max_root_steps: int = 2
    p_loop: float = 0.35
    p_marked: float = 0.6
    max_tries: int = 1000


def random_ground_term(rng: random.Random, depth: int, trs: Trs = TRS_PERM, omega_leaf: float = 0.0) -> Term:
    """A random term over the signature of ``trs``; leaves may be f^ω."""
    syms = sorted(trs.signature.symbols.items())
    consts = [f for f, k in syms if k == 0]
    if depth <= 0 or rng.random() < 0.3:
        if omega_leaf and rng.random() < omega_leaf:
            return trs.parse(F_OMEGA)
        return Term.fun(rng.choice(consts))
    f, k = rng.choice([s for s in syms if s[1] > 0] or syms)
    return Term.fun(f, *(random_ground_term(rng, depth - 1, trs, omega_leaf) for _ in range(k)))


def random_rational_term(
    rng: random.Random, max_nodes: int = 6, symbols: tuple[tuple[str, int], ...] = (("a", 0), ("f", 1), ("h", 2))
) -> Term:
    """A random term graph with arbitrary back-edges (possibly infinite)."""
    n = rng.randint(1, max_nodes)
    table = []
    for _ in range(n):
        sym, k = rng.choice(symbols)
        table.append((FUN, sym, tuple(rng.randrange(n) for _ in range(k))))
    return Term.build(table, 0)


class _Gen:
    def __init__(self, rng: random.Random, cfg: CertGenConfig, trs: Trs):
        self.rng, self.cfg, self.trs = rng, cfg, trs
        self.b = CertBuilder("ired", trs)
        self.f_omega = trs.parse(F_OMEGA)
        self.loops: dict[tuple, tuple[str, Term]] = {}

    def loop(self, s: Term) -> tuple[str, Term] | None:
        """A cyclic proof from ``s`` if one of the known loop shapes applies."""
        key = s.key()
        if key in self.loops:
            return self.loops[key]
        b = self.b
        if s == self.f_omega:
            rule, tgt, mid = 0, self.trs.parse(G_OMEGA), Term.fun("g", s)
        elif not s.is_var and s.head in ("a", "b") and s.arity == 0:
            rule = 1 if s.head == "a" else 2
            tgt, mid = self.trs.parse(C_OMEGA), Term.fun("C", s)
        else:
            return None
        top = b.reserve()
        step = b.root(s, mid, rule)
        lift = b.lift(mid, tgt, [top])
        b.split(s, tgt, [step, lift], nid=top)
        self.loops[key] = (top, tgt)
        return top, tgt

    def proof(self, s: Term, depth: int) -> tuple[str, Term]:
        """A split node proving s ⟶∞ t for some t; returns (node, t)."""
        rng, b = self.rng, self.b
        if rng.random() < self.cfg.p_loop:
            found = self.loop(s)
            if found:
                return found
        if s == self.f_omega:
            # only the loop or the identity are finite-size proofs here
            return b.identity_split(s), s
        premises: list[str] = []
        u = s
        for _ in range(rng.randint(0, self.cfg.max_root_steps)):
            redexes = redexes_to_depth(u, self.trs, 0)
            if redexes and rng.random() < 0.5:
                _, rule = rng.choice(redexes)
                v = apply_step(u, Step((), rule), self.trs)
                premises.append(b.root(u, v, rule))
                u = v
            elif u.arity and depth > 0 and rng.random() < self.cfg.p_marked:
                children, v = self.lift_children(u, depth - 1)
                premises.append(b.lift(u, v, children, marked=True))
                u = v
        if u.arity == 0 and rng.random() < 0.5:
            premises.append(b.ident(u))
            return b.split(s, u, premises), u
        if depth > 0:
            children, v = self.lift_children(u, depth - 1)
        else:
            children, v = [b.identity_split(a) for a in u.args], u
        premises.append(b.lift(u, v, children))
        return b.split(s, v, premises), v

    def lift_children(self, u: Term, depth: int) -> tuple[list[str], Term]:
        out = [self.proof(a, depth) for a in u.args]
        return [c for c, _ in out], Term.fun(u.head, *(t for _, t in out))


def random_ired_cert(
    rng: random.Random, cfg: CertGenConfig = CertGenConfig(), trs: Trs = TRS_PERM
) -> ProofCert:
    """A valid ired certificate over ``trs`` with at most ``cfg.max_nodes`` nodes."""
    for _ in range(cfg.max_tries):
        g = _Gen(rng, cfg, trs)
        s = random_ground_term(rng, 2, trs, omega_leaf=0.2)
        root, _ = g.proof(s, cfg.max_depth)
        cert = g.b.build(root)
        if len(cert) > cfg.max_nodes:
            continue
        verdict = check_valid(cert, trs)
        if not verdict:
            raise AssertionError(f"generator produced an invalid certificate: {verdict}")
        return cert
    raise RuntimeError(f"no certificate within {cfg.max_nodes} nodes after {cfg.max_tries} tries")


def random_sequence(rng: random.Random, source: Term, trs: Trs, length: int) -> FiniteReduction:
    """A random replayable sequence of at most ``length`` steps (stops at normal forms)."""
    steps: list[Step] = []
    t = source
    for _ in range(length):
        redexes = redexes_to_depth(t, trs, len(t))
        if not redexes:
            break
        pos, rule = rng.choice(redexes)
        st = Step(pos, rule)
        steps.append(st)
        t = apply_step(t, st, trs)
    return FiniteReduction(source, tuple(steps))
