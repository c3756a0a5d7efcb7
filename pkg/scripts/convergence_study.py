"""Step-halving ladders for the integrator, the saddle residuals and the decomposition check."""

import argparse
import math
from dataclasses import dataclass

import numpy as np

from dimcheck.growth import (
    GrowthParams,
    State,
    decomposition_residual,
    euler_residual,
    integrate,
    saddle_path,
    steady_state,
)


@dataclass(frozen=True)
class StudyConfig:
    steps: tuple[float, ...] = (0.4, 0.2, 0.1, 0.05)
    saddle_steps: tuple[float, ...] = (0.02, 0.01, 0.005)
    horizon: float = 20.0


def _orders(errs):
    return [math.log2(a / b) for a, b in zip(errs, errs[1:])]


def rk4_ladder(cfg: StudyConfig, p: GrowthParams):
    s0 = State(0.5 * steady_state(p).k, 1.0)
    end = lambda h: (lambda tr: np.array([tr.k[-1], tr.c[-1]]))(integrate(s0, p, h, cfg.horizon))  # noqa: E731
    ref = end(min(cfg.steps) / 16)
    errs = [float(np.linalg.norm(end(h) - ref)) for h in cfg.steps]
    return errs, _orders(errs)


def saddle_ladder(cfg: StudyConfig, p: GrowthParams):
    k0 = 0.5 * steady_state(p).k
    res = [euler_residual(saddle_path(p, k0, h=h).trajectory) for h in cfg.saddle_steps]
    return res, _orders([r[0] for r in res])


def decomposition_ladder(cfg: StudyConfig):
    errs = []
    for h in cfg.saddle_steps:
        t = np.arange(0, 10 + h / 2, h)
        errs.append(decomposition_residual(0.1 + 0.01 * np.sin(t), 1 + 0.1 * np.cos(t), 2 + 0.5 * np.sin(t / 2), 0.01, h))
    return errs, _orders(errs)


if __name__ == "__main__":
    argparse.ArgumentParser(description=__doc__).parse_args()
    cfg, p = StudyConfig(), GrowthParams()
    for label, (vals, orders) in (
        ("rk4 endpoint error", rk4_ladder(cfg, p)),
        ("saddle euler residual", saddle_ladder(cfg, p)),
        ("decomposition residual", decomposition_ladder(cfg)),
    ):
        print(label)
        print("  values:", vals)
        print("  observed orders:", [round(o, 3) for o in orders])
