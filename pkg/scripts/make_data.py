"""Write the fixture TRSs, certificates and sequences to data/ for CLI use."""

from __future__ import annotations

import argparse
import json
from pathlib import Path

from irew import cert_to_json, format_trs, seq_to_json
from irew import fixtures as fx

TRS_FILES = {
    "grow.trs": fx.TRS_GROW,
    "collapse.trs": fx.TRS_COLLAPSE,
    "diagonal.trs": fx.TRS_DIAGONAL,
    "fg.trs": fx.TRS_FG,
    "eq.trs": fx.TRS_EQ,
    "swap.trs": fx.TRS_SWAP,
    "perm.trs": fx.TRS_PERM,
    "proj.trs": fx.TRS_PROJ,
}

CERT_FILES = {
    "a_to_c_omega.json": fx.a_to_c_omega,
    "a_to_c_omega_detour.json": fx.a_to_c_omega_detour,
    "fab_to_d.json": fx.fab_to_d,
    "f_omega_to_g_omega.json": fx.f_omega_to_g_omega,
    "f_omega_to_g_omega_nested.json": fx.f_omega_to_g_omega_nested,
    "c_omega_eq_a.json": fx.c_omega_eq_a,
    "c_omega_to_a_ibi.json": lambda: fx.c_omega_to_a("ibi"),
    "c_omega_to_a_ired.json": lambda: fx.c_omega_to_a("ired"),
    "a_omega_eq_b_omega.json": fx.a_omega_eq_b_omega,
}


def _dump(path: Path, doc) -> None:
    path.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default=str(Path(__file__).resolve().parent.parent / "data"))
    args = ap.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for name, trs in TRS_FILES.items():
        (out / name).write_text(format_trs(trs))
    for name, build in CERT_FILES.items():
        _dump(out / name, cert_to_json(build()))
    proj = fx.projection_sequence()
    _dump(out / "projection_seq.json", seq_to_json(proj, fx.TRS_PROJ))
    print(f"wrote {len(TRS_FILES) + len(CERT_FILES) + 1} files to {out}")


if __name__ == "__main__":
    main()
