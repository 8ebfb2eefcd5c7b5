"""Scaling measurements over generated instances."""
from __future__ import annotations

from dataclasses import dataclass
from statistics import mean

from .arrangement import build
from .generators import generators


@dataclass
class RaysRow:
    n: int
    complexities: list  # per seed: largest unbounded-face complexity (vertices + edges)
    edge_counts: list  # per seed: largest number of boundary edges of an unbounded face

    @property
    def ratio(self) -> float:
        return mean(self.complexities) / self.n

    @property
    def edge_bound(self) -> int:
        # length bound of an order-2 sequence over 2n symbols
        return 2 * (2 * self.n) - 1

    def to_json(self) -> dict:
        return {"n": self.n, "complexities": self.complexities, "edge_counts": self.edge_counts,
                "ratio": round(self.ratio, 6), "edge_bound": self.edge_bound}


def rays_linearity(sizes=(10, 20, 40, 80, 160), seeds=range(5)) -> list[RaysRow]:
    rows = []
    for n in sizes:
        cx, ed = [], []
        for seed in seeds:
            arr = build(generators("rays", n, seed))
            faces = arr.unbounded_faces()
            cx.append(max(arr.face_complexity(f)[0] for f in faces))
            ed.append(max(sum(len(c["half_edges"]) for c in arr.components(f)) for f in faces))
        rows.append(RaysRow(n, cx, ed))
    return rows


def rays_chart(rows: list[RaysRow], out) -> None:
    from .render import line_chart

    xs = [r.n for r in rows]
    line_chart(xs, {"mean max complexity / n": [r.ratio for r in rows],
                    "max boundary edges / n": [max(r.edge_counts) / r.n for r in rows]},
               out, xlabel="n (rays)", ylabel="per curve", title="Unbounded faces of random rays")
