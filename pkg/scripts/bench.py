"""Time validate / impact / round-trip on seeded random models of growing size.

    python3 scripts/bench.py --sizes 100 500 2000 --repeats 5 --seed 0
"""

from __future__ import annotations

import argparse
import random
import statistics
import time
from dataclasses import dataclass, field

from tracekit import build_graph, impact, load_text, print_canonical, validate
from tracekit.synth import SynthConfig, random_change_set, random_model


@dataclass
class BenchConfig:
    sizes: list[int] = field(default_factory=lambda: [100, 500, 2000])
    repeats: int = 5
    link_factor: float = 1.5
    seed: int = 0


def _timed(fn) -> float:
    start = time.perf_counter()
    fn()
    return time.perf_counter() - start


def bench(config: BenchConfig) -> list[dict]:
    rng = random.Random(config.seed)
    rows = []
    for size in config.sizes:
        synth = SynthConfig(max_entities=size, min_entities=size, link_factor=config.link_factor)
        times: dict[str, list[float]] = {"validate": [], "impact": [], "round_trip": []}
        entities = links = 0
        for _ in range(config.repeats):
            model = random_model(rng, synth)
            if not len(model):
                continue
            entities, links = len(model), len(model.links)
            graph = build_graph(model)
            changed = random_change_set(rng, model)
            times["validate"].append(_timed(lambda: validate(model, graph)))
            times["impact"].append(_timed(lambda: impact(model, graph, changed)))
            times["round_trip"].append(_timed(lambda: load_text(print_canonical(model))))
        rows.append({
            "entities": entities,
            "links": links,
            **{f"{k}_ms": 1000 * statistics.median(v) for k, v in times.items() if v},
        })
    return rows


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--sizes", type=int, nargs="+", default=BenchConfig().sizes)
    parser.add_argument("--repeats", type=int, default=BenchConfig.repeats)
    parser.add_argument("--link-factor", type=float, default=BenchConfig.link_factor)
    parser.add_argument("--seed", type=int, default=BenchConfig.seed)
    args = parser.parse_args()
    config = BenchConfig(args.sizes, args.repeats, args.link_factor, args.seed)
    rows = bench(config)
    header = list(rows[0])
    print("  ".join(f"{h:>14}" for h in header))
    for row in rows:
        print("  ".join(f"{row.get(h, float('nan')):>14.2f}" if isinstance(row.get(h), float)
                        else f"{row.get(h, ''):>14}" for h in header))


if __name__ == "__main__":
    main()
