"""Structural comparison of MathML documents.

Two measures: an order-insensitive element F-score for quick regression
checks, and an exact ordered tree edit distance (unit-cost insert, delete,
rename) for in-depth comparison.  Both run on normalized trees so that
inferred mrows, ignorable attributes, and wrapper elements from other
renderers do not count as differences.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

from .mathml import MathMLNode, from_xml

# Elements whose single-child mrow is structural bookkeeping, not content.
_INFERRED_MROW_PARENTS = frozenset({
    "math", "msqrt", "mstyle", "mtd", "mphantom", "mpadded", "menclose",
    "semantics",
})


@dataclass(frozen=True)
class CompareOptions:
    ignore_inferred_mrow: bool = False
    ignored_attributes: frozenset[str] | str = frozenset()  # names, or "all"
    strip_elements: frozenset[str] = frozenset()
    require_semantics_wrapper: bool = False

    def ignores_attr(self, name: str) -> bool:
        if self.ignored_attributes == "all":
            return True
        return name in self.ignored_attributes


FULL_NORMALIZATION = CompareOptions(
    ignore_inferred_mrow=True,
    ignored_attributes="all",
    strip_elements=frozenset({"annotation", "semantics"}),
)


@dataclass(frozen=True)
class FScoreReport:
    precision: float
    recall: float
    f1: float
    matched: int
    only_in_a: int
    only_in_b: int


@dataclass(frozen=True)
class TedResult:
    distance: int
    node_count_a: int
    node_count_b: int


@dataclass(frozen=True)
class PairRow:
    id: str
    ted: int | None
    f1: float | None
    error: str | None = None


@dataclass(frozen=True)
class CorpusReport:
    formula_count: int
    overall_ted: int
    average_ted: float
    rows: tuple[PairRow, ...]
    errors: tuple[str, ...] = ()

    def to_dict(self) -> dict:
        return {
            "formula_count": self.formula_count,
            "overall_ted": self.overall_ted,
            "average_ted": round(self.average_ted, 3),
            "errors": list(self.errors),
            "rows": [
                {"id": r.id, "ted": r.ted, "f1": r.f1, "error": r.error}
                for r in self.rows
            ],
        }


def normalize(tree: MathMLNode, options: CompareOptions) -> MathMLNode:
    """Apply the comparison normalizations; the result is a fresh tree."""
    root = tree.copy()
    if options.require_semantics_wrapper and root.element == "math":
        if not any(child.element == "semantics" for child in root.children):
            root.children = [MathMLNode("semantics", {}, root.children)]
    changed = True
    while changed:
        root, changed = _normalize_pass(root, options)
    return root


def _normalize_pass(node: MathMLNode, options: CompareOptions) -> tuple[MathMLNode, bool]:
    changed = False
    if options.ignored_attributes == "all":
        if node.attributes:
            node.attributes = {}
            changed = True
    else:
        for name in list(node.attributes):
            if options.ignores_attr(name):
                del node.attributes[name]
                changed = True

    new_children: list[MathMLNode] = []
    for child in node.children:
        if child.element in options.strip_elements:
            # Splice the stripped wrapper's children into this node.
            new_children.extend(child.children)
            changed = True
        else:
            new_children.append(child)
    node.children = new_children

    if options.ignore_inferred_mrow:
        replaced: list[MathMLNode] = []
        for child in node.children:
            if child.element == "mrow" and len(child.children) == 1:
                replaced.append(child.children[0])
                changed = True
            else:
                replaced.append(child)
        node.children = replaced
        if (node.element in _INFERRED_MROW_PARENTS and len(node.children) == 1
                and node.children[0].element == "mrow"
                and not node.children[0].attributes):
            node.children = node.children[0].children
            changed = True

    out_children = []
    for child in node.children:
        new_child, child_changed = _normalize_pass(child, options)
        out_children.append(new_child)
        changed = changed or child_changed
    node.children = out_children
    return node, changed


# -- element F-score --------------------------------------------------------


def _items(tree: MathMLNode) -> Counter:
    counter: Counter = Counter()
    for node in tree.iter():
        attrs = frozenset(node.attributes.items())
        counter[(node.element, node.text, attrs)] += 1
    return counter


def element_fscore(a: MathMLNode, b: MathMLNode,
                   options: CompareOptions = CompareOptions()) -> FScoreReport:
    """Order-insensitive multiset overlap of (element, token text, attributes)."""
    items_a = _items(normalize(a, options))
    items_b = _items(normalize(b, options))
    matched = sum((items_a & items_b).values())
    total_a = sum(items_a.values())
    total_b = sum(items_b.values())
    precision = matched / total_a if total_a else 0.0
    recall = matched / total_b if total_b else 0.0
    f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
    return FScoreReport(
        precision=precision,
        recall=recall,
        f1=f1,
        matched=matched,
        only_in_a=total_a - matched,
        only_in_b=total_b - matched,
    )


# -- tree edit distance ------------------------------------------------------


def _label(node: MathMLNode) -> tuple[str, str]:
    return (node.element, node.text or "")


class _Indexed:
    """Postorder arrays for the Zhang-Shasha dynamic program."""

    def __init__(self, root: MathMLNode):
        self.labels: list[tuple[str, str]] = []
        self.lmld: list[int] = []  # leftmost leaf descendant, postorder index
        self._index(root)
        n = len(self.labels)
        seen: set[int] = set()
        keyroots = []
        for i in range(n - 1, -1, -1):
            if self.lmld[i] not in seen:
                seen.add(self.lmld[i])
                keyroots.append(i)
        self.keyroots = sorted(keyroots)

    def _index(self, node: MathMLNode) -> int:
        first_leaf = None
        for child in node.children:
            child_lmld = self._index(child)
            if first_leaf is None:
                first_leaf = child_lmld
        index = len(self.labels)
        self.labels.append(_label(node))
        self.lmld.append(first_leaf if first_leaf is not None else index)
        return self.lmld[index]


def tree_edit_distance(a: MathMLNode, b: MathMLNode,
                       options: CompareOptions = CompareOptions()) -> TedResult:
    """Exact ordered tree edit distance with unit costs (Zhang-Shasha)."""
    ta = _Indexed(normalize(a, options))
    tb = _Indexed(normalize(b, options))
    m, n = len(ta.labels), len(tb.labels)
    if m == 0 or n == 0:
        return TedResult(max(m, n), m, n)

    treedist = [[0] * n for _ in range(m)]
    for i in ta.keyroots:
        for j in tb.keyroots:
            _forest_distance(ta, tb, i, j, treedist)
    return TedResult(treedist[m - 1][n - 1], m, n)


def _forest_distance(ta: _Indexed, tb: _Indexed, i: int, j: int,
                     treedist: list[list[int]]) -> None:
    li, lj = ta.lmld[i], tb.lmld[j]
    m = i - li + 2
    n = j - lj + 2
    fd = [[0] * n for _ in range(m)]
    for x in range(1, m):
        fd[x][0] = fd[x - 1][0] + 1  # delete
    for y in range(1, n):
        fd[0][y] = fd[0][y - 1] + 1  # insert
    for x in range(1, m):
        for y in range(1, n):
            xi = x + li - 1  # postorder index in a
            yj = y + lj - 1  # postorder index in b
            if ta.lmld[xi] == li and tb.lmld[yj] == lj:
                rename = 0 if ta.labels[xi] == tb.labels[yj] else 1
                fd[x][y] = min(
                    fd[x - 1][y] + 1,
                    fd[x][y - 1] + 1,
                    fd[x - 1][y - 1] + rename,
                )
                treedist[xi][yj] = fd[x][y]
            else:
                p = ta.lmld[xi] - li
                q = tb.lmld[yj] - lj
                fd[x][y] = min(
                    fd[x - 1][y] + 1,
                    fd[x][y - 1] + 1,
                    fd[p][q] + treedist[xi][yj],
                )


# -- corpus aggregation -------------------------------------------------------


@dataclass(frozen=True)
class ComparePair:
    id: str
    a: str  # serialized MathML
    b: str


def batch_compare(pairs: list[ComparePair],
                  options: CompareOptions = CompareOptions()) -> CorpusReport:
    """Per-pair TED and F-score plus Table-style aggregates.

    Pairs that fail to parse as XML are excluded from the aggregates and
    surfaced in the report header.
    """
    rows: list[PairRow] = []
    errors: list[str] = []
    overall = 0
    counted = 0
    for pair in sorted(pairs, key=lambda p: p.id):
        try:
            tree_a = from_xml(pair.a)
            tree_b = from_xml(pair.b)
        except Exception as exc:
            message = f"{pair.id}: XML parse failure: {exc}"
            errors.append(message)
            rows.append(PairRow(pair.id, None, None, error=str(exc)))
            continue
        ted = tree_edit_distance(tree_a, tree_b, options)
        score = element_fscore(tree_a, tree_b, options)
        rows.append(PairRow(pair.id, ted.distance, score.f1))
        overall += ted.distance
        counted += 1
    average = overall / counted if counted else 0.0
    return CorpusReport(
        formula_count=counted,
        overall_ted=overall,
        average_ted=average,
        rows=tuple(rows),
        errors=tuple(errors),
    )


def format_report_table(report: CorpusReport) -> str:
    """Human-readable aggregate block shaped like the evaluation tables."""
    mean_f1 = (
        sum(r.f1 for r in report.rows if r.f1 is not None) / report.formula_count
        if report.formula_count else 0.0
    )
    lines = []
    for message in report.errors:
        lines.append(f"! {message}")
    lines.append(f"Number of formulas\t{report.formula_count}")
    lines.append(f"Overall TED\t{report.overall_ted}")
    lines.append(f"Average TED\t{report.average_ted:.3f}")
    lines.append(f"Average F1\t{mean_f1:.3f}")
    return "\n".join(lines)
