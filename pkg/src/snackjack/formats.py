"""Text, CSV and JSON renderings of tables and sweeps.

All numeric wire formats are deterministic: exact values travel as
"p/q" fraction strings next to a float convenience field, floats are
rendered with repr (shortest round-trip form), and sweep CSV rows are
emitted row-major with theta varying fastest.
"""

from __future__ import annotations

import io
import math
import re
from fractions import Fraction
from typing import Optional, Sequence, Union

from .oracle import (
    GameParams,
    Number,
    StrategyOp,
    basic_strategy,
    ewl_payoffs,
    quadruples,
)
from .rules import INITIAL_CLASSES, Rank

RANK_LABELS = {Rank.ACE: "A", Rank.TWO: "2", Rank.THREE: "3"}

_PI_PATTERN = re.compile(r"^(\d+)?\s*pi(?:\s*/\s*(\d+))?$")


def parse_angle(token: Union[str, float, int]) -> float:
    """Parse an angle given as a number or a pi token like "pi/2" or "3pi/8"."""
    if isinstance(token, (int, float)):
        return float(token)
    text = token.strip().lower().replace(" ", "")
    m = _PI_PATTERN.match(text)
    if m:
        num = int(m.group(1) or 1)
        den = int(m.group(2) or 1)
        return num * math.pi / den
    try:
        return float(text)
    except ValueError:
        raise ValueError(f"cannot parse angle {token!r}") from None


def format_angle(value: float) -> str:
    """Compact display form; exact multiples of pi/8 print as pi tokens."""
    if value == 0.0:
        return "0"
    for num in range(1, 9):
        for den in (1, 2, 4, 8):
            if abs(value - num * math.pi / den) < 1e-12:
                if math.gcd(num, den) != 1:
                    continue
                n = "" if num == 1 else str(num)
                d = "" if den == 1 else f"/{den}"
                return f"{n}pi{d}"
    return repr(value)


def format_fraction(value: Number) -> Optional[str]:
    """Exact values as explicit "p/q"; None when the value is a float."""
    if isinstance(value, Fraction):
        return f"{value.numerator}/{value.denominator}"
    return None


def format_number(value: Number) -> str:
    """Display form: fractions as-is, floats via repr."""
    if isinstance(value, Fraction):
        return str(value)
    return repr(float(value))


def strategy_set_label(ops: Sequence[StrategyOp]) -> str:
    return "".join(op.value for op in ops)


def table_rows(params: Optional[GameParams]) -> list[dict]:
    """Per-class table rows; classical when ``params`` is None."""
    best_sets = basic_strategy(params)
    rows = []
    for cls, quad, best in zip(INITIAL_CLASSES, quadruples(), best_sets):
        row = {
            "row": cls.row,
            "player": [RANK_LABELS[r] for r in cls.player_ranks],
            "up": RANK_LABELS[cls.up_rank],
            "e_std": quad.e_std,
            "e_hit": quad.e_hit,
            "cases": cls.cases,
            "best": [op.value for op in best],
        }
        if params is not None:
            row["e_00"] = quad.e_00
            row["e_10"] = quad.e_10
        rows.append(row)
    return rows


def _value_columns(params: Optional[GameParams]) -> list[tuple[str, str]]:
    cols = [("e_std", "E[stand]"), ("e_hit", "E[hit]")]
    if params is not None:
        cols += [("e_00", "E[00]"), ("e_10", "E[10]")]
    return cols


def render_table_text(params: Optional[GameParams]) -> str:
    """Fixed-width table; byte-stable for identical inputs."""
    rows = table_rows(params)
    cols = [("row", "Row"), ("player", "Player"), ("up", "Up")]
    cols += _value_columns(params)
    cols += [("cases", "Cases"), ("best", "Best")]

    def cell(row: dict, key: str) -> str:
        v = row[key]
        if key == "player":
            return ",".join(v)
        if key == "best":
            return "".join(v)
        if isinstance(v, (Fraction, float)):
            return format_number(v)
        return str(v)

    table = [[cell(r, k) for k, _ in cols] for r in rows]
    headers = [h for _, h in cols]
    widths = [
        max(len(headers[i]), *(len(t[i]) for t in table))
        for i in range(len(cols))
    ]
    left = {"player", "up", "best"}
    out = io.StringIO()
    title = "classical strategy table" if params is None else (
        f"quantum strategy table  gamma={format_angle(params.gamma)}"
        f"  theta={format_angle(params.theta)}"
    )
    out.write(title + "\n")
    out.write("  ".join(h.ljust(w) for h, w in zip(headers, widths)).rstrip() + "\n")
    for t in table:
        out.write("  ".join(
            c.ljust(w) if key in left else c.rjust(w)
            for c, w, (key, _) in zip(t, widths, cols)
        ).rstrip() + "\n")
    return out.getvalue()


def render_table_csv(params: Optional[GameParams]) -> str:
    rows = table_rows(params)
    keys = ["row", "player", "up"]
    keys += [k for k, _ in _value_columns(params)]
    keys += ["cases", "best"]
    lines = [",".join(keys)]
    for r in rows:
        cells = []
        for k in keys:
            v = r[k]
            if k == "player":
                cells.append("".join(v))
            elif k == "best":
                cells.append("".join(v))
            elif isinstance(v, (Fraction, float)):
                cells.append(format_number(v))
            else:
                cells.append(str(v))
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def table_json(params: Optional[GameParams]) -> dict:
    rows = []
    for r in table_rows(params):
        row = {
            "row": r["row"],
            "player": r["player"],
            "up": r["up"],
            "cases": r["cases"],
            "best": r["best"],
        }
        for key in ("e_std", "e_hit", "e_00", "e_10"):
            if key in r:
                row[key] = {
                    "fraction": format_fraction(r[key]),
                    "value": float(r[key]),
                }
        rows.append(row)
    payload: dict = {"rows": rows}
    if params is not None:
        payload["params"] = {"gamma": params.gamma, "theta": params.theta}
    else:
        payload["params"] = None
    return payload


def render_sweep_csv(
    gammas: Sequence[float], thetas: Sequence[float], grid: Sequence[Sequence[float]]
) -> str:
    """CSV sweep dump: header then one row per (gamma, theta), theta fastest."""
    lines = ["gamma,theta,expectation"]
    for gi, g in enumerate(gammas):
        for ti, t in enumerate(thetas):
            lines.append(f"{g!r},{t!r},{float(grid[gi][ti])!r}")
    return "\n".join(lines) + "\n"


def strategy_payoff_entries(row: int, params: GameParams) -> list[dict]:
    """Strategy tags with exact payoffs and best-set membership for one row."""
    quad = quadruples()[row - 1]
    payoffs = ewl_payoffs(quad, params)
    best = basic_strategy(params)[row - 1]
    return [
        {
            "strategy": op.value,
            "payoff": format_fraction(payoffs[op]),
            "value": float(payoffs[op]),
            "best": op in best,
        }
        for op in StrategyOp
    ]
