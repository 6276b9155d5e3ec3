"""Tree model for LaTeXML's hybrid math markup (XMath).

The XMath dialect mixes content-oriented structure (applications, tokens
with meanings) with presentation material (delimiters, script operators).
Five element kinds occur:

* ``XMApp``  -- generalized application, operator first;
* ``XMTok``  -- generalized token, carries text and semantic attributes;
* ``XMDual`` -- pairs a content branch (child 0) with a presentation
  branch (child 1) for notations whose two readings differ structurally;
* ``XMRef``  -- shares one node between both branches of a dual, via
  ``xml:id``/``idref``;
* ``XMWrap`` -- wrapper for unparsed token runs (renders like a row).

Documents are immutable after construction and safe to read concurrently.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum, IntEnum

from .errors import DanglingRefError, ReferenceCycleError


class NodeKind(Enum):
    APP = "XMApp"
    TOK = "XMTok"
    DUAL = "XMDual"
    REF = "XMRef"
    WRAP = "XMWrap"


#: element local name -> node kind; anything else is a parse error.
ELEMENT_KINDS = {kind.value: kind for kind in NodeKind}


class Branch(IntEnum):
    """Which side of a dual (and which output tree) is meant.

    The numeric value doubles as the child index within an ``XMDual``.
    """

    CONTENT = 0
    PRESENTATION = 1

    @property
    def opposite(self) -> "Branch":
        return Branch(1 - self.value)


#: Token roles named by the grammar. Any other string is accepted verbatim
#: and treated as an unclassified ("other") role.
KNOWN_ROLES = frozenset(
    {
        "ADDOP",
        "MULOP",
        "ID",
        "FUNCTION",
        "OPEN",
        "CLOSE",
        "PUNCT",
        "UNKNOWN",
        "INTOP",
        "DIFFOP",
        "SUPERSCRIPTOP",
        "SUBSCRIPTOP",
    }
)


@dataclass
class SemanticAttrs:
    """Attributes with dedicated handling, plus a pass-through map.

    Attributes outside the named set are preserved verbatim in ``extra``
    so richer upstream markup survives a round trip.
    """

    role: str | None = None
    meaning: str | None = None
    xml_id: str | None = None
    idref: str | None = None
    font: str | None = None
    mathstyle: str | None = None
    stretchy: bool | None = None
    scriptpos: str | None = None
    extra: dict[str, str] = field(default_factory=dict)


@dataclass(eq=False)
class XMathNode:
    """One node of the XMath tree. Identity equality; never mutated after parse."""

    kind: NodeKind
    children: list["XMathNode"] = field(default_factory=list)
    text: str | None = None
    attrs: SemanticAttrs = field(default_factory=SemanticAttrs)
    index: int = -1  # document-order position, assigned by XMathDocument
    line: int = 0
    col: int = 0

    def __repr__(self) -> str:  # compact, for test failure output
        bits = [self.kind.value]
        if self.attrs.xml_id:
            bits.append(f"id={self.attrs.xml_id}")
        if self.attrs.meaning:
            bits.append(f"meaning={self.attrs.meaning}")
        if self.text:
            bits.append(repr(self.text))
        return "<{} #{}>".format(" ".join(bits), self.index)


class XMathDocument:
    """An XMath tree plus its id and parent indexes.

    ``nodes`` lists every node in document order (depth-first, left to
    right); ``node.index`` is the position in that list.
    """

    def __init__(self, root: XMathNode):
        self.root = root
        self.nodes: list[XMathNode] = []
        self.id_index: dict[str, XMathNode] = {}
        self.parent_index: dict[XMathNode, XMathNode] = {}
        self._index(root, None)
        for node in self.nodes:
            idref = node.attrs.idref
            if idref is not None and idref not in self.id_index:
                raise DanglingRefError(idref)

    def _index(self, node: XMathNode, parent: XMathNode | None) -> None:
        node.index = len(self.nodes)
        self.nodes.append(node)
        if parent is not None:
            self.parent_index[node] = parent
        xml_id = node.attrs.xml_id
        if xml_id is not None:
            if xml_id in self.id_index:
                raise ValueError(f"duplicate xml:id {xml_id!r}")
            self.id_index[xml_id] = node
        for child in node.children:
            self._index(child, node)

    def resolve_ref(self, ref_node: XMathNode) -> XMathNode:
        """Resolve an XMRef one step, to the node carrying its idref as xml:id."""
        if ref_node.kind is not NodeKind.REF:
            raise ValueError("resolve_ref expects an XMRef node")
        try:
            return self.id_index[ref_node.attrs.idref]
        except KeyError:
            raise DanglingRefError(ref_node.attrs.idref) from None

    def deref(self, node: XMathNode) -> XMathNode:
        """Follow XMRef chains to a non-ref node, guarding against cycles."""
        seen: set[int] = set()
        while node.kind is NodeKind.REF:
            if node.index in seen:
                raise ReferenceCycleError("reference cycle via idref", node)
            seen.add(node.index)
            node = self.resolve_ref(node)
        return node

    def nearest_dual_ancestor(self, node: XMathNode) -> XMathNode | None:
        """Closest strict ancestor XMDual, by physical structure (not refs)."""
        current = self.parent_index.get(node)
        while current is not None:
            if current.kind is NodeKind.DUAL:
                return current
            current = self.parent_index.get(current)
        return None

    def top_operator(self, dual: XMathNode, branch: Branch) -> XMathNode | None:
        """Top-most operator applied within one branch of a dual.

        Refs are chased both for the branch root and for the operator
        position; a branch that is not an application has no operator.
        """
        if dual.kind is not NodeKind.DUAL:
            raise ValueError("top_operator expects an XMDual node")
        root = self.deref(dual.children[branch.value])
        if root.kind is not NodeKind.APP or not root.children:
            return None
        return self.deref(root.children[0])


def structurally_equal(a: XMathNode, b: XMathNode) -> bool:
    """Compare two trees by shape, text and attributes (not identity)."""
    if a.kind is not b.kind or a.text != b.text:
        return False
    if a.attrs != b.attrs:
        return False
    if len(a.children) != len(b.children):
        return False
    return all(structurally_equal(x, y) for x, y in zip(a.children, b.children))
