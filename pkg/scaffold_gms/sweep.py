"""Bulk structure reports over grids of shift parameters and ideal exponents."""

import asyncio
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence, Tuple

from .errors import SizeLimitError
from .padic import check_prime, check_rank
from .scaffold_core import ScaffoldParams, analyze

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SweepCell:
    p: int
    n: int
    b: Tuple[int, ...]
    h: int


def b_classes(p: int, n: int) -> List[int]:
    """Residues B in [1, p^n) prime to p."""
    return [b for b in range(1, p**n) if b % p]


def check_order(p: int, n: int, limit: int) -> int:
    check_prime(p)
    check_rank(n)
    order = p**n
    if order > limit:
        raise SizeLimitError(f"sweep over p^n = {p}^{n}", order, limit)
    return order


def sweep_cells(p: int, n: int, bs: Sequence[int], hs: Sequence[int]) -> List[SweepCell]:
    """Cells ordered by b, then h."""
    return [SweepCell(p, n, (b,) * n, h) for b in sorted(bs) for h in sorted(hs)]


def analyze_cell(cell: SweepCell) -> Dict[str, Any]:
    return analyze(cell.h, ScaffoldParams(cell.p, cell.n, cell.b)).to_dict()


async def run_sweep(cells: Sequence[SweepCell], jobs: int = 1) -> List[Dict[str, Any]]:
    """Analyze every cell; rows come back in cell order whatever ``jobs`` is."""
    if jobs <= 1:
        return [analyze_cell(cell) for cell in cells]
    loop = asyncio.get_running_loop()
    logger.debug("dispatching %d cells to %d workers", len(cells), jobs)
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        tasks = [loop.run_in_executor(pool, analyze_cell, cell) for cell in cells]
        results = await asyncio.gather(*tasks)
    return list(results)


def sweep(
    p: int,
    n: int,
    bs: Sequence[int],
    hs: Optional[Sequence[int]] = None,
    jobs: int = 1,
    limit: int = 625,
) -> List[Dict[str, Any]]:
    order = check_order(p, n, limit)
    cells = sweep_cells(p, n, bs, range(order) if hs is None else hs)
    return asyncio.run(run_sweep(cells, jobs))
