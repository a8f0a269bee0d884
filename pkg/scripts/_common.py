"""Shared argument handling for the experiment scripts."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from modderiv.report import dumps


def parser(description: str) -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(description=description)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", help="write the JSON report here instead of stdout")
    return p


def emit(obj, out: str | None) -> None:
    text = dumps(obj)
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)
