"""Choice of the source XMath node recorded on every generated MathML node.

Cross-references are later derived purely from these sources: two output
nodes are linked when they were ascribed the same source. The decision
procedure distinguishes container targets (rows, applies, script boxes)
from token targets, and for tokens invisible to the opposite branch it
decides between the operator they manifest and the enclosing dual.
"""

from __future__ import annotations

from dataclasses import dataclass

from .model import Branch, XMathDocument, XMathNode
from .visibility import VisibilityMap

_UNSET = object()


@dataclass
class AscriptionContext:
    """State for one ascription decision.

    ``current`` is the XMath node that directly generated the target.
    ``container`` is the innermost dual on the generation walk's path;
    when a ref was followed, that is the dual enclosing the ref, not the
    one physically enclosing the referenced node. If not supplied, the
    physical ancestor is used.
    """

    doc: XMathDocument
    vis: VisibilityMap
    current: XMathNode
    branch: Branch
    container: XMathNode | None = _UNSET  # type: ignore[assignment]

    def __post_init__(self) -> None:
        if self.container is _UNSET:
            self.container = self.doc.nearest_dual_ancestor(self.current)


def ascribe(ctx: AscriptionContext, target_is_container: bool) -> XMathNode:
    """Pick the source node for one generated target. Total and pure.

    Containers belong to the notation as a whole: they are ascribed to the
    enclosing dual when there is one. A token visible in both branches is
    its own source. A one-sided token inside a dual stands either for the
    current operator (when that operator never shows up in presentation)
    or for the dual itself.
    """
    if target_is_container:
        if ctx.container is not None:
            return ctx.container
        return ctx.current
    if ctx.vis.both_visible(ctx.current):
        return ctx.current
    if ctx.container is not None:
        operator = ctx.doc.top_operator(ctx.container, Branch.CONTENT)
        if operator is not None and not ctx.vis.presentation_visible(operator):
            return operator
        return ctx.container
    return ctx.current
