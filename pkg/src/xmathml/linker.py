"""Id allocation, cross-reference wiring and parallel assembly.

Every generated node gets a stable id derived from its ascribed source:
the source's xml:id when it has one, otherwise a fresh ``prefix.k``
allocated in document order of first appearance. Targets sharing a source
within a branch are distinguished by letter suffixes in document order,
and content-side ids append ".cmml". Cross-references then connect each
node to the document-order-first opposite-branch node with the same
source.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .errors import IdCollisionError
from .mml import TargetNode
from .model import Branch, XMathDocument

CONTENT_ID_SUFFIX = ".cmml"


@dataclass
class IdScheme:
    """Prefix and counter state for id allocation."""

    prefix: str = "m1"
    next_counter: int = 1

    @classmethod
    def infer(cls, doc: XMathDocument) -> "IdScheme":
        """Derive the scheme from the document's existing xml:ids.

        The prefix is the head (before the first dot) of the first id in
        document order; the counter continues past the largest k found in
        ``prefix.k``-shaped ids, so allocated ids extend the input
        sequence instead of colliding with it.
        """
        prefix = None
        for node in doc.nodes:
            xml_id = node.attrs.xml_id
            if xml_id and "." in xml_id:
                prefix = xml_id.split(".", 1)[0]
                break
        if not prefix:
            prefix = "m1"
        pattern = re.compile(re.escape(prefix) + r"\.(\d+)")
        highest = 0
        for xml_id in doc.id_index:
            match = pattern.match(xml_id)
            if match:
                highest = max(highest, int(match.group(1)))
        return cls(prefix, highest + 1)


@dataclass
class AscriptionRegistry:
    """All generated targets grouped by (source, branch), in document order."""

    trees: dict[Branch, TargetNode] = field(default_factory=dict)
    targets: dict[tuple[int, Branch], list[TargetNode]] = field(default_factory=dict)

    def add_tree(self, root: TargetNode, branch: Branch) -> None:
        self.trees[branch] = root
        for node in root.iter():
            if node.source is None or node.branch is None:
                raise ValueError(f"unascribed node {node!r} reached the linker")
            self.targets.setdefault((node.source.index, branch), []).append(node)


def build_registry(
    pmml: TargetNode | None = None, cmml: TargetNode | None = None
) -> AscriptionRegistry:
    registry = AscriptionRegistry()
    if pmml is not None:
        registry.add_tree(pmml, Branch.PRESENTATION)
    if cmml is not None:
        registry.add_tree(cmml, Branch.CONTENT)
    return registry


def _suffix_letters(index: int) -> str:
    """0 -> "", 1 -> "a", ..., 26 -> "z", 27 -> "aa" (spreadsheet style)."""
    letters = ""
    while index > 0:
        index -= 1
        letters = chr(ord("a") + index % 26) + letters
        index //= 26
    return letters


def assign_ids(registry: AscriptionRegistry, scheme: IdScheme) -> None:
    """Set the id attribute on every registered target node."""
    bases: dict[int, str] = {}
    counter = scheme.next_counter
    for branch in (Branch.PRESENTATION, Branch.CONTENT):
        root = registry.trees.get(branch)
        if root is None:
            continue
        for node in root.iter():
            source = node.source
            if source.index in bases:
                continue
            if source.attrs.xml_id is not None:
                bases[source.index] = source.attrs.xml_id
            else:
                bases[source.index] = f"{scheme.prefix}.{counter}"
                counter += 1

    seen: dict[str, TargetNode] = {}
    for (source_index, branch), nodes in registry.targets.items():
        base = bases[source_index]
        for position, node in enumerate(nodes):
            node_id = base + _suffix_letters(position)
            if branch is Branch.CONTENT:
                node_id += CONTENT_ID_SUFFIX
            if node_id in seen:
                raise IdCollisionError(f"output id {node_id!r} allocated twice")
            seen[node_id] = node
            node.attrs["id"] = node_id


def link_xrefs(registry: AscriptionRegistry) -> None:
    """Point every node at the first opposite-branch node sharing its source."""
    for (source_index, branch), nodes in registry.targets.items():
        opposite = registry.targets.get((source_index, branch.opposite))
        if not opposite:
            continue
        first_id = opposite[0].attrs["id"]
        for node in nodes:
            node.attrs["xref"] = first_id


def _existing_ids(*roots: TargetNode) -> set[str]:
    ids = set()
    for root in roots:
        for node in root.iter():
            node_id = node.attrs.get("id")
            if node_id is not None:
                ids.add(node_id)
    return ids


def _reserve(wrapper_id: str, used: set[str]) -> str:
    if wrapper_id in used:
        raise IdCollisionError(f"wrapper id {wrapper_id!r} collides with a node id")
    return wrapper_id


def assemble_parallel(
    pmml: TargetNode,
    cmml: TargetNode,
    tex: str | None = None,
    display: str | None = None,
    *,
    scheme: IdScheme | None = None,
) -> TargetNode:
    """Wrap linked presentation and content trees into one math element.

    The math/semantics/annotation wrappers get prefix, prefix+a/b/c ids
    and never carry xrefs. The TeX annotation (and alttext) appear only
    when tex is given.
    """
    prefix = (scheme or IdScheme()).prefix
    used = _existing_ids(pmml, cmml)

    math_attrs: dict[str, str] = {"id": _reserve(prefix, used)}
    if display is not None:
        math_attrs["display"] = display
    if tex is not None:
        math_attrs["alttext"] = tex
    math_attrs["class"] = "ltx_Math"

    semantics = TargetNode(
        "semantics", {"id": _reserve(prefix + "a", used)}, [pmml]
    )
    annotation_xml = TargetNode(
        "annotation-xml",
        {"id": _reserve(prefix + "b", used), "encoding": "MathML-Content"},
        [cmml],
    )
    semantics.children.append(annotation_xml)
    if tex is not None:
        semantics.children.append(
            TargetNode(
                "annotation",
                {"id": _reserve(prefix + "c", used), "encoding": "application/x-tex"},
                text=tex,
            )
        )
    return TargetNode("math", math_attrs, [semantics])


def assemble_single(
    root: TargetNode,
    display: str | None = None,
    *,
    scheme: IdScheme | None = None,
) -> TargetNode:
    """Wrap a single-branch tree (ids, no xrefs) into a bare math element."""
    prefix = (scheme or IdScheme()).prefix
    used = _existing_ids(root)
    attrs: dict[str, str] = {"id": _reserve(prefix, used)}
    if display is not None:
        attrs["display"] = display
    attrs["class"] = "ltx_Math"
    return TargetNode("math", attrs, [root])


# -- link contract validation -----------------------------------------------


@dataclass
class LinkViolation:
    kind: str
    message: str

    def __str__(self) -> str:
        return f"{self.kind}: {self.message}"


@dataclass
class LinkReport:
    violations: list[LinkViolation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def lines(self) -> list[str]:
        return [str(v) for v in self.violations]

    def add(self, kind: str, message: str) -> None:
        self.violations.append(LinkViolation(kind, message))


def _strip_suffix_letters(base: str) -> str:
    match = re.match(r"^(.*?)([a-z]+)$", base)
    if match and match.group(1) and not match.group(1)[-1].islower():
        return match.group(1)
    return base


def _id_base(node_id: str, branch: Branch) -> str:
    if branch is Branch.CONTENT and node_id.endswith(CONTENT_ID_SUFFIX):
        node_id = node_id[: -len(CONTENT_ID_SUFFIX)]
    return _strip_suffix_letters(node_id)


def _locate_branches(math: TargetNode) -> tuple[TargetNode, TargetNode]:
    if math.element != "math":
        raise ValueError("expected a math element")
    if len(math.children) != 1 or math.children[0].element != "semantics":
        raise ValueError("math must contain exactly one semantics element")
    semantics = math.children[0]
    presentation = None
    content = None
    for child in semantics.children:
        if child.element == "annotation-xml":
            if child.attrs.get("encoding") == "MathML-Content" and child.children:
                content = child.children[0]
        elif child.element != "annotation" and presentation is None:
            presentation = child
    if presentation is None or content is None:
        raise ValueError("not a parallel markup instance")
    return presentation, content


def check_links(math: TargetNode) -> LinkReport:
    """Validate the cross-referencing contract of an assembled math element.

    Checks id uniqueness, xref resolution within the element, shared-source
    consistency, completeness, and first-in-document-order minimality.
    Freshly generated trees are checked against their recorded sources;
    re-parsed documents fall back to reconstructing source classes from
    the id scheme (base + letter suffix, content ids ending in .cmml).
    """
    report = LinkReport()
    presentation, content = _locate_branches(math)

    all_ids: dict[str, TargetNode] = {}
    for node in math.iter():
        node_id = node.attrs.get("id")
        if node_id is None:
            continue
        if node_id in all_ids:
            report.add("id-uniqueness", f"id {node_id!r} appears more than once")
        else:
            all_ids[node_id] = node

    sides = {
        Branch.PRESENTATION: list(presentation.iter()),
        Branch.CONTENT: list(content.iter()),
    }
    tree_nodes = {id(n) for nodes in sides.values() for n in nodes}
    use_sources = all(
        node.source is not None for nodes in sides.values() for node in nodes
    )

    def source_class(node: TargetNode, branch: Branch) -> object:
        if use_sources:
            return node.source.index
        return _id_base(node.attrs.get("id", ""), branch)

    first_of: dict[tuple[Branch, object], str] = {}
    branch_of: dict[str, Branch] = {}
    for branch, nodes in sides.items():
        for node in nodes:
            node_id = node.attrs.get("id")
            if node_id is None:
                report.add("id-missing", f"{node.element} node carries no id")
                continue
            branch_of[node_id] = branch
            key = (branch, source_class(node, branch))
            first_of.setdefault(key, node_id)

    for node in math.iter():
        if id(node) not in tree_nodes and "xref" in node.attrs:
            report.add(
                "wrapper-xref", f"wrapper {node.element} must not carry xref"
            )

    for branch, nodes in sides.items():
        for node in nodes:
            node_id = node.attrs.get("id")
            if node_id is None:
                continue
            cls = source_class(node, branch)
            opposite_first = first_of.get((branch.opposite, cls))
            xref = node.attrs.get("xref")
            if xref is None:
                if opposite_first is not None:
                    report.add(
                        "missing-xref",
                        f"{node_id} has opposite-branch targets but no xref",
                    )
                continue
            if xref not in all_ids:
                report.add(
                    "xref-resolution",
                    f"{node_id} points at {xref!r}, which does not exist",
                )
                continue
            if branch_of.get(xref) is not branch.opposite:
                report.add(
                    "xref-branch",
                    f"{node_id} points at {xref!r} in the same branch",
                )
                continue
            target = all_ids[xref]
            if source_class(target, branch.opposite) != cls:
                report.add(
                    "shared-source",
                    f"{node_id} and its xref target {xref} have different sources",
                )
                continue
            if opposite_first is not None and xref != opposite_first:
                report.add(
                    "document-order",
                    f"{node_id} should point at {opposite_first}, not {xref}",
                )
    return report
