"""Binary label matrices and the diagonal (box-value) calculus.

The box-value of cell (i, j) of an R-row grid is R + j - i (1-based); cells
of equal box-value form a diagonal.  A grid is graceful when every diagonal
holds at most one 1, completely graceful when every diagonal holds exactly
one (the principal diagonal of an adjacency grid stays empty).  For a
canonical grid the box-value of an occupied cell equals the edge label of
the edge it represents, which is what makes the calculus tick.

A LabeledMatrix carries (vertex id, label) metadata per row/column slot, so
every orientation (identity, 180-degree rotation, transpose, both) remains
self-describing.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Callable, Iterator, Sequence  # noqa: F401

from .errors import LabelingInputError, MatrixError
from .graphs import Graph, build_graph, is_tree
from .labelings import (
    ALPHA,
    BETA,
    Labeling,
    Verdict,
    augment_hat,
    pad_labeling,
    verify_alpha,
)

ADJACENCY = "adjacency"
BIADJACENCY = "biadjacency"

Grid = tuple[tuple[int, ...], ...]
Slot = tuple[int, int]  # (vertex id, label)


def box_value(num_rows: int, num_cols: int, i: int, j: int) -> int:
    """Box-value R + j - i of the 1-based cell (i, j) of an R x C grid."""
    if not (1 <= i <= num_rows):
        raise MatrixError(f"row index {i} out of range 1..{num_rows}")
    if not (1 <= j <= num_cols):
        raise MatrixError(f"column index {j} out of range 1..{num_cols}")
    return num_rows + j - i


def _freeze_grid(rows: Sequence[Sequence[int]]) -> Grid:
    return tuple(tuple(int(x) for x in row) for row in rows)


@dataclass(frozen=True)
class LabeledMatrix:
    """A 0/1 grid plus per-slot (vertex id, label) metadata."""

    kind: str
    grid: Grid
    row_slots: tuple[Slot, ...]
    col_slots: tuple[Slot, ...]
    critical: int | None = None

    def __post_init__(self) -> None:
        if self.kind not in (ADJACENCY, BIADJACENCY):
            raise MatrixError(f"unknown matrix kind {self.kind!r}")
        if len(self.grid) != len(self.row_slots):
            raise MatrixError("row metadata does not match grid height")
        for row in self.grid:
            if len(row) != len(self.col_slots):
                raise MatrixError("column metadata does not match grid width")
            if any(x not in (0, 1) for x in row):
                raise MatrixError("grid entries must be 0 or 1")
        if self.kind == ADJACENCY:
            if self.critical is not None:
                raise MatrixError("adjacency matrices carry no critical value")
            if self.row_slots != self.col_slots:
                raise MatrixError("adjacency matrices need identical row/column slots")
            n = len(self.grid)
            for i in range(n):
                if self.grid[i][i] != 0:
                    raise MatrixError(f"principal diagonal not empty at index {i}")
                for j in range(i + 1, n):
                    if self.grid[i][j] != self.grid[j][i]:
                        raise MatrixError(f"grid not symmetric at ({i}, {j})")
        else:
            if self.critical is None:
                raise MatrixError("biadjacency matrices need a critical value")
        ids = [vid for vid, _ in self.row_slots]
        if self.kind == BIADJACENCY:
            ids += [vid for vid, _ in self.col_slots]
        if len(ids) != len(set(ids)):
            raise MatrixError("a vertex id appears in two slots")

    @property
    def num_rows(self) -> int:
        return len(self.grid)

    @property
    def num_cols(self) -> int:
        return len(self.col_slots)

    @property
    def row_labels(self) -> tuple[int, ...]:
        return tuple(lab for _, lab in self.row_slots)

    @property
    def col_labels(self) -> tuple[int, ...]:
        return tuple(lab for _, lab in self.col_slots)

    def ones(self) -> list[tuple[int, int]]:
        """Occupied cells as 0-based (i, j), row-major order."""
        return [
            (i, j)
            for i, row in enumerate(self.grid)
            for j, x in enumerate(row)
            if x
        ]

    def cell_box_value(self, i: int, j: int) -> int:
        """Box-value of the 0-based cell (i, j)."""
        return box_value(self.num_rows, self.num_cols, i + 1, j + 1)

    def is_canonical(self) -> bool:
        """Labels ascend with position (the identity orientation)."""
        if self.kind == ADJACENCY:
            return self.row_labels == tuple(range(self.num_rows))
        k = self.critical
        return self.row_labels == tuple(range(k + 1)) and self.col_labels == tuple(
            range(k + 1, k + 1 + self.num_cols)
        )

    def row_index_of_label(self, label: int) -> int:
        try:
            return self.row_labels.index(label)
        except ValueError:
            raise MatrixError(f"no row labeled {label}") from None

    def col_index_of_label(self, label: int) -> int:
        try:
            return self.col_labels.index(label)
        except ValueError:
            raise MatrixError(f"no column labeled {label}") from None


@dataclass(frozen=True)
class GridVerdict:
    """Outcome of a diagonal check; bad diagonals listed by box-value."""

    ok: bool
    overfull: tuple[int, ...] = ()
    deficient: tuple[int, ...] = ()

    def __bool__(self) -> bool:
        return self.ok

    @property
    def first_violation(self) -> int | None:
        bad = sorted(self.overfull + self.deficient)
        return bad[0] if bad else None


def _diagonal_counts(m: LabeledMatrix) -> dict[int, int]:
    counts: dict[int, int] = {}
    for i, j in m.ones():
        c = m.cell_box_value(i, j)
        counts[c] = counts.get(c, 0) + 1
    return counts


def is_graceful_grid(m: LabeledMatrix) -> GridVerdict:
    """Every diagonal holds at most one 1."""
    counts = _diagonal_counts(m)
    overfull = tuple(sorted(c for c, n in counts.items() if n > 1))
    return GridVerdict(not overfull, overfull=overfull)


def is_completely_graceful(m: LabeledMatrix) -> GridVerdict:
    """Every diagonal holds exactly one 1 (adjacency: principal stays empty)."""
    counts = _diagonal_counts(m)
    total = m.num_rows + m.num_cols - 1
    skip = {m.num_rows} if m.kind == ADJACENCY else set()
    overfull = sorted(c for c, n in counts.items() if n > 1)
    deficient = []
    for c in range(1, total + 1):
        n = counts.get(c, 0)
        if c in skip:
            if n:
                overfull.append(c)
            continue
        if n == 0:
            deficient.append(c)
    return GridVerdict(
        not overfull and not deficient,
        overfull=tuple(sorted(overfull)),
        deficient=tuple(deficient),
    )


def canonical_adjacency(g: Graph, f: Labeling) -> LabeledMatrix:
    """Adjacency grid of the padded graph with slots ordered by label.

    Needs only injectivity into 0..m, so broken-but-rangewise-valid
    labelings can be rendered and then rejected by the diagonal check.
    """
    ghat = augment_hat(g)
    assignment = pad_labeling(g, f)
    m = g.num_edges
    labels = sorted(assignment.values())
    if labels != list(range(m + 1)):
        raise LabelingInputError(
            f"labels are not a bijection onto 0..{m}: got {labels}"
        )
    by_label = {lab: v for v, lab in assignment.items()}
    slots = tuple((by_label[lab], lab) for lab in range(m + 1))
    grid = [[0] * (m + 1) for _ in range(m + 1)]
    for u, v in ghat.edges:
        a, b = assignment[u], assignment[v]
        grid[a][b] = 1
        grid[b][a] = 1
    return LabeledMatrix(ADJACENCY, _freeze_grid(grid), slots, slots)


def canonical_biadjacency(
    g: Graph, f: Labeling, max_label: int | None = None
) -> LabeledMatrix:
    """Biadjacency grid of an alpha labeling: rows 0..k, columns k+1..bound."""
    bound = g.num_edges if max_label is None else max_label
    verdict = verify_alpha(g, f, bound)
    if not verdict:
        raise LabelingInputError(f"labeling is not alpha: {verdict.reason}")
    k = verdict.critical
    assignment = pad_labeling(g, f, bound)
    by_label = {lab: v for v, lab in assignment.items()}
    if sorted(by_label) != list(range(bound + 1)):
        raise LabelingInputError("padded labels do not cover 0..bound")
    row_slots = tuple((by_label[lab], lab) for lab in range(k + 1))
    col_slots = tuple((by_label[lab], lab) for lab in range(k + 1, bound + 1))
    grid = [[0] * len(col_slots) for _ in range(k + 1)]
    for u, v in g.edges:
        lo, hi = sorted((assignment[u], assignment[v]))
        grid[lo][hi - (k + 1)] = 1
    return LabeledMatrix(BIADJACENCY, _freeze_grid(grid), row_slots, col_slots, k)


ROTATE = "R"
TRANSPOSE = "T"
ROTATE_TRANSPOSE = "RT"


def transform(m: LabeledMatrix, which: str) -> LabeledMatrix:
    """Reorient a biadjacency grid: R rotates 180 degrees, T transposes.

    Orientation is data: slots travel with the grid, so gracefulness checks
    keep working on the result.
    """
    if m.kind != BIADJACENCY:
        raise MatrixError("only biadjacency matrices have the four orientations")
    if which == ROTATE:
        grid = tuple(tuple(reversed(row)) for row in reversed(m.grid))
        return LabeledMatrix(
            BIADJACENCY,
            grid,
            tuple(reversed(m.row_slots)),
            tuple(reversed(m.col_slots)),
            m.critical,
        )
    if which == TRANSPOSE:
        grid = tuple(tuple(row) for row in zip(*m.grid))
        if not grid:
            grid = tuple(() for _ in m.col_slots)
        return LabeledMatrix(BIADJACENCY, grid, m.col_slots, m.row_slots, m.critical)
    if which == ROTATE_TRANSPOSE:
        return transform(transform(m, ROTATE), TRANSPOSE)
    raise MatrixError(f"unknown transform {which!r}")


def inverse_alpha(f: Labeling, k: int, n: int) -> Labeling:
    """The reflected labeling v -> (k - f(v)) mod n of a complete alpha map.

    An involution; corresponds to the 180-degree rotation of the canonical
    biadjacency grid.
    """
    labels = sorted(f.assignment.values())
    if labels != list(range(n)):
        raise LabelingInputError(
            f"labeling is not a bijection onto 0..{n - 1}; cannot invert"
        )
    flipped = {v: (k - lab) % n for v, lab in f.assignment.items()}
    return Labeling(flipped, ALPHA, k)


def matrix_to_graph(m: LabeledMatrix) -> tuple[Graph, Labeling]:
    """Rebuild the labeled graph a canonical grid describes."""
    if not m.is_canonical():
        raise MatrixError("matrix metadata is not in canonical orientation")
    if m.kind == ADJACENCY:
        ids = [vid for vid, _ in m.row_slots]
        n = len(ids)
        if sorted(ids) != list(range(n)):
            raise MatrixError("slot ids are not 0..n-1")
        label_of = {vid: lab for vid, lab in m.row_slots}
        id_of_label = {lab: vid for vid, lab in m.row_slots}
        edges = set()
        for i, j in m.ones():
            if i < j:
                edges.add(tuple(sorted((id_of_label[i], id_of_label[j]))))
        g = build_graph(n, edges)
        return g, Labeling({v: label_of[v] for v in range(n)}, BETA)
    ids = [vid for vid, _ in m.row_slots] + [vid for vid, _ in m.col_slots]
    n = len(ids)
    if sorted(ids) != list(range(n)):
        raise MatrixError("slot ids are not 0..n-1")
    edges = []
    for i, j in m.ones():
        edges.append((m.row_slots[i][0], m.col_slots[j][0]))
    g = build_graph(n, edges)
    assignment = {vid: lab for vid, lab in m.row_slots}
    assignment.update({vid: lab for vid, lab in m.col_slots})
    return g, Labeling(assignment, ALPHA, m.critical)


def _with_grid(m: LabeledMatrix, grid: Grid) -> LabeledMatrix:
    return LabeledMatrix(m.kind, grid, m.row_slots, m.col_slots, m.critical)


def shift_ones(
    m: LabeledMatrix,
    moves: Sequence[tuple[tuple[int, int], tuple[int, int]]],
    require_tree_result: bool = False,
) -> LabeledMatrix:
    """Move 1s between cells addressed by (row label, column label) pairs.

    All removals happen before all placements, so compensating pairs of
    moves may transiently collide.  The result must still be completely
    graceful (and, on request, describe a tree); otherwise this raises.
    """
    grid = [list(row) for row in m.grid]
    cells = []
    for (r_lab, c_lab), (r_lab2, c_lab2) in moves:
        src = (m.row_index_of_label(r_lab), m.col_index_of_label(c_lab))
        dst = (m.row_index_of_label(r_lab2), m.col_index_of_label(c_lab2))
        if grid[src[0]][src[1]] != 1:
            raise MatrixError(f"source cell ({r_lab}, {c_lab}) holds no 1")
        cells.append((src, dst, (r_lab2, c_lab2)))
    for (si, sj), _, _ in cells:
        grid[si][sj] = 0
    for _, (di, dj), dst_labels in cells:
        if grid[di][dj] != 0:
            raise MatrixError(f"target cell {dst_labels} is already occupied")
        grid[di][dj] = 1
    out = _with_grid(m, _freeze_grid(grid))
    verdict = is_completely_graceful(out)
    if not verdict:
        raise MatrixError(
            f"shifted grid is not completely graceful; first bad diagonal "
            f"{verdict.first_violation}"
        )
    if require_tree_result:
        g, _ = matrix_to_graph(out)
        if not is_tree(g):
            raise MatrixError("shifted grid no longer describes a tree")
    return out


def _atomic_steps(m: LabeledMatrix) -> Iterator[Grid]:
    """Grids one step away: slide a 1 on its diagonal, or swap two diagonals."""
    grid = m.grid
    rows, cols = m.num_rows, m.num_cols
    ones = m.ones()
    occupied = set(ones)

    def diagonal_cells(c: int) -> list[tuple[int, int]]:
        # 0-based cells with box-value c: j = c - rows + i
        return [
            (i, c - rows + i)
            for i in range(rows)
            if 0 <= c - rows + i < cols
        ]

    def moved(changes: dict[tuple[int, int], int]) -> Grid:
        return tuple(
            tuple(
                changes.get((i, j), grid[i][j])
                for j in range(cols)
            )
            for i in range(rows)
        )

    for i, j in ones:
        c = m.cell_box_value(i, j)
        for cell in diagonal_cells(c):
            if cell not in occupied:
                yield moved({(i, j): 0, cell: 1})
    for a in range(len(ones)):
        for b in range(a + 1, len(ones)):
            p, q = ones[a], ones[b]
            cp = m.cell_box_value(*p)
            cq = m.cell_box_value(*q)
            for p2 in diagonal_cells(cq):
                if p2 in occupied and p2 != q:
                    continue
                for q2 in diagonal_cells(cp):
                    if q2 in occupied and q2 != p:
                        continue
                    if p2 == q2:
                        continue
                    yield moved({p: 0, q: 0, p2: 1, q2: 1})


def enumerate_shifts(
    m: LabeledMatrix,
    max_steps: int,
    predicate: Callable[[LabeledMatrix], bool] | None = None,
) -> Iterator[LabeledMatrix]:
    """Breadth-first stream of completely graceful tree grids within reach.

    States are deduplicated by grid bytes and visited in a deterministic
    order; intermediate states need not describe trees, but only tree grids
    that satisfy the predicate are yielded.
    """
    start = is_completely_graceful(m)
    if not start:
        raise MatrixError("starting grid is not completely graceful")

    def emit(grid: Grid) -> LabeledMatrix | None:
        candidate = _with_grid(m, grid)
        g, _ = matrix_to_graph(candidate)
        if not is_tree(g):
            return None
        if predicate is not None and not predicate(candidate):
            return None
        return candidate

    seen = {m.grid}
    frontier = deque([m.grid])
    first = emit(m.grid)
    if first is not None:
        yield first
    for _ in range(max_steps):
        next_frontier: deque[Grid] = deque()
        while frontier:
            grid = frontier.popleft()
            for succ in _atomic_steps(_with_grid(m, grid)):
                if succ in seen:
                    continue
                seen.add(succ)
                next_frontier.append(succ)
                out = emit(succ)
                if out is not None:
                    yield out
        frontier = next_frontier
        if not frontier:
            break
