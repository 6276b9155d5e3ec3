"""Shared test machinery: golden comparison and independent oracles."""

from __future__ import annotations

from xmathml import read_xml_tree, target_from_raw
from xmathml.mml import TargetNode
from xmathml.model import NodeKind, XMathDocument


def parse_mathml(text: str) -> TargetNode:
    return target_from_raw(read_xml_tree(text))


def _rename(node: TargetNode, renames: dict[str, str]) -> None:
    node.element = renames.get(node.element, node.element)
    for child in node.children:
        _rename(child, renames)


def assert_isomorphic(
    actual_text: str,
    expected_text: str,
    rename_elements: dict[str, str] | None = None,
) -> None:
    """Assert two MathML documents are equal up to a bijective id renaming.

    Structure, text and all attributes except id/xref must match node for
    node. The id mapping collected from matched nodes must be a bijection,
    and every xref must map through it to the expected xref.
    """
    actual = parse_mathml(actual_text)
    expected = parse_mathml(expected_text)
    if rename_elements:
        _rename(expected, rename_elements)

    id_map: dict[str, str] = {}
    reverse: dict[str, str] = {}
    pairs: list[tuple[TargetNode, TargetNode, str]] = []

    def walk(a: TargetNode, b: TargetNode, path: str) -> None:
        assert a.element == b.element, f"{path}: element {a.element} != {b.element}"
        assert (a.text or "") == (b.text or ""), (
            f"{path}: text {a.text!r} != {b.text!r}"
        )
        plain_a = {k: v for k, v in a.attrs.items() if k not in ("id", "xref")}
        plain_b = {k: v for k, v in b.attrs.items() if k not in ("id", "xref")}
        assert plain_a == plain_b, f"{path}: attrs {plain_a} != {plain_b}"
        assert ("id" in a.attrs) == ("id" in b.attrs), f"{path}: id presence differs"
        assert ("xref" in a.attrs) == ("xref" in b.attrs), (
            f"{path}: xref presence differs"
        )
        if "id" in a.attrs:
            mine, theirs = a.attrs["id"], b.attrs["id"]
            if mine in id_map:
                assert id_map[mine] == theirs, (
                    f"{path}: id {mine} maps to {id_map[mine]} and {theirs}"
                )
            else:
                assert theirs not in reverse, (
                    f"{path}: ids {mine} and {reverse[theirs]} both map to {theirs}"
                )
                id_map[mine] = theirs
                reverse[theirs] = mine
        assert len(a.children) == len(b.children), (
            f"{path}: {len(a.children)} children != {len(b.children)}"
        )
        pairs.append((a, b, path))
        for i, (x, y) in enumerate(zip(a.children, b.children)):
            walk(x, y, f"{path}/{x.element}[{i}]")

    walk(actual, expected, "")
    for a, b, path in pairs:
        if "xref" in a.attrs:
            mapped = id_map.get(a.attrs["xref"])
            assert mapped == b.attrs["xref"], (
                f"{path}: xref {a.attrs['xref']} maps to {mapped}, "
                f"expected {b.attrs['xref']}"
            )


def visibility_oracle(doc: XMathDocument) -> dict[int, frozenset[str]]:
    """Brute-force reachability: enumerate every root-to-node flag path.

    Walks all (node, flag set) states reachable from the root, where duals
    intersect the flags with their branch and refs carry flags across.
    The per-node union over states is the reference visibility.
    """
    flags: dict[int, set[str]] = {node.index: set() for node in doc.nodes}
    seen: set[tuple[int, frozenset[str]]] = set()

    def explore(node, carried: frozenset[str]) -> None:
        state = (node.index, carried)
        if state in seen:
            return
        seen.add(state)
        flags[node.index] |= carried
        if node.kind is NodeKind.DUAL:
            explore(node.children[0], carried & {"C"})
            explore(node.children[1], carried & {"P"})
        elif node.kind is NodeKind.REF:
            explore(doc.resolve_ref(node), carried)
        else:
            for child in node.children:
                explore(child, carried)

    explore(doc.root, frozenset({"C", "P"}))
    return {index: frozenset(value) for index, value in flags.items()}


def oracle_agrees(doc: XMathDocument, vis) -> bool:
    expected = visibility_oracle(doc)
    for node in doc.nodes:
        content, presentation = vis.flags(node)
        reference = expected[node.index]
        if content != ("C" in reference) or presentation != ("P" in reference):
            return False
    return True
