"""Check every bundled model and print a one-line verdict per file."""

import argparse
from dataclasses import dataclass
from pathlib import Path

from dimcheck import CORPUS, check_model, parse_model


@dataclass(frozen=True)
class AuditConfig:
    corpus: Path = CORPUS
    verbose: bool = False


def audit(cfg: AuditConfig) -> int:
    failing = 0
    for path in sorted(cfg.corpus.glob("*.model")):
        report = check_model(parse_model(path.read_text()))
        bad = len(report.violations)
        failing += bad > 0
        print(f"{path.name:28s} {report.summary()}")
        if cfg.verbose and bad:
            print(report.to_text(color=False))
    return failing


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--corpus", type=Path, default=CORPUS)
    ap.add_argument("-v", "--verbose", action="store_true")
    ns = ap.parse_args()
    n = audit(AuditConfig(ns.corpus, ns.verbose))
    print(f"{n} file(s) with violations")
