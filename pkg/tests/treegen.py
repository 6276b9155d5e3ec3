"""Seeded random XMath document generator for corpus-style tests.

Documents stay within the convertible subset on purpose: applications
always have an operator, wraps only occur where the content walk cannot
reach them, refs always resolve, and ref targets are chosen so chains can
never cycle (tokens anywhere, or duals strictly earlier in document order
that do not enclose the ref). Everything else - nesting duals inside
either branch, cross-branch refs, odd role/meaning/font combinations - is
fair game.
"""

from __future__ import annotations

import random

from xmathml.model import NodeKind, SemanticAttrs, XMathDocument, XMathNode

ROLE_POOL = [
    None, "ID", "ID", "ID", "FUNCTION", "ADDOP", "MULOP", "OPEN", "CLOSE",
    "PUNCT", "UNKNOWN", "INTOP", "DIFFOP", "RELOP", "SUPERSCRIPTOP", "SUBSCRIPTOP",
]
TEXT_POOL = ["a", "b", "x", "y", "F", "f", "42", "7", "+", "(", ")", ",", "|", "Ψ", "H", ""]
MEANING_POOL = [None, None, None, None, "plus", "times", "integral", "custom-op", "differential-d"]
FONT_POOL = [None, None, None, "italic", "normal", "caligraphic"]


def _random_token(rng: random.Random) -> XMathNode:
    attrs = SemanticAttrs(
        role=rng.choice(ROLE_POOL),
        meaning=rng.choice(MEANING_POOL),
        font=rng.choice(FONT_POOL),
    )
    if rng.random() < 0.12:
        attrs.stretchy = rng.random() < 0.5
    if rng.random() < 0.04:
        attrs.mathstyle = "display"
    if attrs.role in ("SUPERSCRIPTOP", "SUBSCRIPTOP") and rng.random() < 0.7:
        attrs.scriptpos = rng.choice(["post1", "post2"])
    return XMathNode(NodeKind.TOK, text=rng.choice(TEXT_POOL), attrs=attrs)


def _gen(
    rng: random.Random,
    depth: int,
    budget: list[int],
    wrap_ok: bool,
    ref_slots: list[XMathNode],
    max_depth: int,
) -> XMathNode:
    # Invariant: called with budget >= 1 and consumes at most that many
    # nodes, so a document never exceeds its node cap.
    budget[0] -= 1

    def leaf() -> XMathNode:
        node = _random_token(rng)
        if rng.random() < 0.18:
            ref_slots.append(node)
        return node

    def spawn(width: int, optional_first: bool = False) -> list[XMathNode]:
        children: list[XMathNode] = []
        for _ in range(width):
            if budget[0] < 1 and (children or optional_first):
                break
            children.append(
                _gen(rng, depth + 1, budget, wrap_ok, ref_slots, max_depth)
            )
        return children

    if depth >= max_depth or budget[0] <= 1:
        return leaf()
    roll = rng.random()
    if roll < 0.40:
        return leaf()
    if roll < 0.72:
        return XMathNode(NodeKind.APP, spawn(rng.randint(1, 4)))
    if roll < 0.90:
        budget[0] -= 1  # reserve a node for the presentation child
        content = _gen(rng, depth + 1, budget, False, ref_slots, max_depth)
        budget[0] += 1
        presentation = _gen(rng, depth + 1, budget, True, ref_slots, max_depth)
        return XMathNode(NodeKind.DUAL, [content, presentation])
    if wrap_ok:
        return XMathNode(NodeKind.WRAP, spawn(rng.randint(0, 4), optional_first=True))
    return XMathNode(NodeKind.APP, spawn(rng.randint(1, 3)))


def _finalize_refs(
    rng: random.Random, root: XMathNode, ref_slots: list[XMathNode]
) -> None:
    order: list[XMathNode] = []
    parents: dict[int, XMathNode | None] = {}

    def walk(node: XMathNode, parent: XMathNode | None) -> None:
        order.append(node)
        parents[id(node)] = parent
        for child in node.children:
            walk(child, node)

    walk(root, None)
    position = {id(node): i for i, node in enumerate(order)}
    slot_ids = {id(slot) for slot in ref_slots}
    tokens = [n for n in order if n.kind is NodeKind.TOK and id(n) not in slot_ids]
    duals = [n for n in order if n.kind is NodeKind.DUAL]

    def ensure_id(node: XMathNode) -> str:
        if node.attrs.xml_id is None:
            node.attrs.xml_id = f"v{position[id(node)]}"
        return node.attrs.xml_id

    for slot in ref_slots:
        ancestors: set[int] = set()
        parent = parents[id(slot)]
        while parent is not None:
            ancestors.add(id(parent))
            parent = parents[id(parent)]
        candidates = list(tokens)
        candidates.extend(
            dual
            for dual in duals
            if position[id(dual)] < position[id(slot)] and id(dual) not in ancestors
        )
        if not candidates:
            continue  # slot stays a plain token
        target = rng.choice(candidates)
        slot.kind = NodeKind.REF
        slot.text = None
        slot.children = []
        slot.attrs = SemanticAttrs(idref=ensure_id(target))


def random_document(
    seed: int | None = None,
    rng: random.Random | None = None,
    max_depth: int = 6,
    max_nodes: int = 40,
) -> XMathDocument:
    rng = rng if rng is not None else random.Random(seed)
    ref_slots: list[XMathNode] = []
    budget = [max_nodes]
    root = _gen(rng, 0, budget, False, ref_slots, max_depth)
    _finalize_refs(rng, root, ref_slots)
    return XMathDocument(root)


def make_corpus(count: int, seed: int = 20260810) -> list[XMathDocument]:
    rng = random.Random(seed)
    return [random_document(rng=rng) for _ in range(count)]
