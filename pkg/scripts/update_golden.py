"""Rewrite tests/golden/*.out from the current CLI output."""

import contextlib
import io
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT / "tests"))

from golden_cases import CASES  # noqa: E402

from jzlab.cli import main  # noqa: E402


def run(argv):
    buf = io.StringIO()
    with contextlib.redirect_stdout(buf):
        code = main(["--quiet", *argv])
    return code, buf.getvalue()


if __name__ == "__main__":
    out_dir = ROOT / "tests" / "golden"
    out_dir.mkdir(exist_ok=True)
    for name, argv in CASES.items():
        code, text = run(argv)
        if code != 0:
            raise SystemExit(f"{name}: exit {code}")
        (out_dir / f"{name}.out").write_text(text)
        print(f"wrote {name}.out")
