#!/usr/bin/env python3
"""Regenerate the pinned CLI golden files under tests/golden/.

Run from the repository root after an intentional output change:

    python3 scripts/regen_goldens.py

Every golden is the byte-exact stdout of one CLI invocation; the CLI test
replays the same invocations and compares bytes.
"""

import contextlib
import io
import pathlib
import sys

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parents[1] / "src"))

from spektoy.cli import main  # noqa: E402

GOLDEN_DIR = pathlib.Path(__file__).resolve().parents[1] / "tests" / "golden"

INVOCATIONS = {
    # quasi-probability tables pinned for both rebit constructions and the
    # odd-d construction: ground state, conjugate basis state, entangled
    # pair, magic resource
    "wigner_factorisable_zero.json": ["wigner", "--state", "+Z", "--spec", "factorisable-rebit"],
    "wigner_factorisable_plus.json": ["wigner", "--state", "+X", "--spec", "factorisable-rebit"],
    "wigner_factorisable_bell.json": ["wigner", "--state", "+XX,+ZZ", "--spec", "factorisable-rebit"],
    "wigner_factorisable_tplus.json": ["wigner", "--state", "T|+>", "--spec", "factorisable-rebit"],
    "wigner_delfosse_zero.json": ["wigner", "--state", "+Z", "--spec", "delfosse-rebit"],
    "wigner_delfosse_plus.json": ["wigner", "--state", "+X", "--spec", "delfosse-rebit"],
    "wigner_delfosse_bell.json": ["wigner", "--state", "+XX,+ZZ", "--spec", "delfosse-rebit"],
    "wigner_delfosse_czpp.json": ["wigner", "--state", "CZ|++>", "--spec", "delfosse-rebit"],
    "wigner_gross_zero.json": ["wigner", "--state", "+Z", "--spec", "gross", "--d", "3"],
    "wigner_gross_plus.json": ["wigner", "--state", "+X", "--spec", "gross", "--d", "3"],
    "wigner_gross_bell.json": ["wigner", "--state", "X1X1,Z1Z2", "--spec", "gross", "--d", "3"],
    # witness certificates
    "witness_chsh.json": ["witness", "chsh"],
    "witness_ghz.json": ["witness", "ghz"],
    "witness_peres_mermin.json": ["witness", "peres-mermin"],
    "witness_peres_mermin_s.json": ["witness", "peres-mermin-s"],
    # injection reports
    "inject_s_plus.json": ["inject", "--gate", "S", "--input", "+"],
    "inject_cz_pp.json": ["inject", "--gate", "CZ", "--input", "++"],
    "inject_ccz_ppp.json": ["inject", "--gate", "CCZ", "--input", "+++"],
    # subtheory manifest
    "subtheory_minimal_n2.json": ["subtheory", "verify", "minimal-rebit", "--n", "2"],
}


def capture(argv):
    buf = io.StringIO()
    with contextlib.redirect_stdout(buf):
        code = main(argv)
    return code, buf.getvalue()


def main_script():
    GOLDEN_DIR.mkdir(parents=True, exist_ok=True)
    for fname, argv in INVOCATIONS.items():
        code, text = capture(argv)
        (GOLDEN_DIR / fname).write_text(text)
        print(f"wrote {fname} (exit {code}, {len(text)} bytes)")


if __name__ == "__main__":
    main_script()
