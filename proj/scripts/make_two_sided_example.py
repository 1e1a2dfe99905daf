#!/usr/bin/env python3
"""Write data/two_sided_example.txt: 1000 draws Y_i ~ N(1 + mu_i, 4) with
mu_i = 0 for the first 850, 5 for the next 75 and -3 for the last 75."""

import pathlib

import numpy as np

SEED = 20200601


def main() -> None:
    rng = np.random.default_rng(SEED)
    mu = np.concatenate([np.zeros(850), np.full(75, 5.0), np.full(75, -3.0)])
    y = 1.0 + mu + 2.0 * rng.standard_normal(mu.size)
    out = pathlib.Path(__file__).resolve().parent.parent / "data" / "two_sided_example.txt"
    out.write_text("value\n" + "".join(f"{v!r}\n" for v in y.tolist()))


if __name__ == "__main__":
    main()
