"""Content MathML generation, the meaning table and pragmatic expansion.

Tokens map through a meaning table: known meanings become empty content
elements (plus, int, ...), unknown meanings become csymbol entries in the
latexml dictionary, and meaning-less tokens become ci identifiers. An
application whose operator meaning has an expansion rule is rewritten into
a pragmatic template (head element, wrapper elements like bvar/lowlimit,
reordered argument slots) instead of a plain apply.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Mapping

from .ascription import AscriptionContext, ascribe
from .errors import (
    ArityMismatchError,
    ContentWrapError,
    MalformedApplyError,
    ReferenceCycleError,
)
from .glyphs import is_greek_capital, script_form
from .mml import TargetNode
from .model import Branch, NodeKind, XMathDocument, XMathNode
from .visibility import VisibilityMap

#: Meanings rendered as bare pragmatic content elements. Most map to the
#: element of the same name; aliases cover the integral spellings.
_IDENTITY_ELEMENTS = (
    "plus minus times divide power root abs conjugate factorial quotient rem "
    "gcd lcm max min exp ln log sin cos tan sec csc cot sinh cosh tanh "
    "arcsin arccos arctan eq neq gt lt geq leq and or xor not implies "
    "forall exists union intersect setdiff subset prsubset in notin "
    "sum product limit diff partialdiff compose ident "
    "emptyset infinity pi imaginaryi exponentiale"
)

KNOWN_CONTENT_ELEMENTS: dict[str, str] = {
    name: name for name in _IDENTITY_ELEMENTS.split()
}
KNOWN_CONTENT_ELEMENTS["integral"] = "int"
KNOWN_CONTENT_ELEMENTS["hack-definite-integral"] = "int"

#: Template terms: ("head",) renders the operator token, ("slot", k) the
#: k-th argument, ("elem", name, children) a literal element. A literal
#: element with no children stands in for the operator, like head.
Term = tuple


@dataclass(frozen=True)
class ExpansionRule:
    """Rewrites one application into a pragmatic content template."""

    meaning: str
    arity: int
    template: Term

    def __post_init__(self) -> None:
        slots = sorted(_collect_slots(self.template))
        if slots != list(range(1, self.arity + 1)):
            raise ValueError(
                f"rule for {self.meaning!r}: template slots {slots} are not "
                f"a permutation of 1..{self.arity}"
            )


def _collect_slots(term: Term) -> list[int]:
    if term[0] == "slot":
        return [term[1]]
    if term[0] == "elem":
        out: list[int] = []
        for child in term[2]:
            out.extend(_collect_slots(child))
        return out
    return []


_TEMPLATE_TOKEN = re.compile(r"\(|\)|[^\s()]+")
_SLOT = re.compile(r"slot(\d+)$")


def _parse_template(text: str, context: str) -> Term:
    tokens = _TEMPLATE_TOKEN.findall(text)
    pos = 0

    def parse() -> Term:
        nonlocal pos
        if pos >= len(tokens):
            raise ValueError(f"{context}: unexpected end of template")
        token = tokens[pos]
        pos += 1
        if token == ")":
            raise ValueError(f"{context}: unexpected ')'")
        if token == "(":
            if pos >= len(tokens) or tokens[pos] in ("(", ")"):
                raise ValueError(f"{context}: expected element name after '('")
            name = tokens[pos]
            pos += 1
            children = []
            while pos < len(tokens) and tokens[pos] != ")":
                children.append(parse())
            if pos >= len(tokens):
                raise ValueError(f"{context}: missing ')'")
            pos += 1
            return ("elem", name, tuple(children))
        if token == "head":
            return ("head",)
        slot = _SLOT.match(token)
        if slot:
            index = int(slot.group(1))
            if index < 1:
                raise ValueError(f"{context}: slot indices start at 1")
            return ("slot", index)
        return ("elem", token, ())

    term = parse()
    if pos != len(tokens):
        raise ValueError(f"{context}: trailing tokens after template")
    return term


def load_expansion_table(text: str) -> dict[str, ExpansionRule]:
    """Parse the line-oriented expansion table format.

    Each non-comment line reads ``meaning arity template`` where template
    is a parenthesized term over head, slotN and element names.
    """
    rules: dict[str, ExpansionRule] = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split(None, 2)
        if len(fields) != 3:
            raise ValueError(f"line {lineno}: expected 'meaning arity template'")
        meaning, arity_text, template_text = fields
        if not arity_text.isdigit():
            raise ValueError(f"line {lineno}: arity must be an integer")
        template = _parse_template(template_text, f"line {lineno}")
        rules[meaning] = ExpansionRule(meaning, int(arity_text), template)
    return rules


BUILTIN_EXPANSIONS = """
# meaning                 arity  template
hack-definite-integral    4      (apply head (bvar slot4) (lowlimit slot1) (uplimit slot2) slot3)
"""


@dataclass(frozen=True)
class MeaningTable:
    """Total lookup from token meanings to content markup.

    Meanings resolve to a known empty element, to an expansion rule when
    used as an operator, or fall back to a latexml csymbol.
    """

    elements: Mapping[str, str]
    expansions: Mapping[str, ExpansionRule]

    @staticmethod
    def default() -> "MeaningTable":
        return MeaningTable(
            dict(KNOWN_CONTENT_ELEMENTS), load_expansion_table(BUILTIN_EXPANSIONS)
        )

    def extended(self, rules: Mapping[str, ExpansionRule]) -> "MeaningTable":
        merged = dict(self.expansions)
        merged.update(rules)
        return MeaningTable(self.elements, merged)


def token_to_cmml(tok: XMathNode, table: MeaningTable | None = None) -> TargetNode:
    """Map one token to its content element.

    Identifier text follows the token's font: upright Greek capitals get a
    "normal-" prefix, calligraphic letters their script code point.
    """
    table = table or MeaningTable.default()
    meaning = tok.attrs.meaning
    if meaning is not None:
        element = table.elements.get(meaning)
        if element is not None:
            return TargetNode(element)
        return TargetNode("csymbol", {"cd": "latexml"}, text=meaning)
    return TargetNode("ci", text=_identifier_text(tok))


def _identifier_text(tok: XMathNode) -> str:
    text = tok.text or ""
    font = tok.attrs.font
    if font == "caligraphic":
        return script_form(text)
    if font in (None, "normal") and is_greek_capital(text):
        return "normal-" + text
    return text


def gen_cmml(
    doc: XMathDocument, vis: VisibilityMap, table: MeaningTable | None = None
) -> TargetNode:
    """Generate the content tree for a whole document."""
    return _Walk(doc, vis, table or MeaningTable.default()).walk(doc.root, None)


class _Walk:
    def __init__(self, doc: XMathDocument, vis: VisibilityMap, table: MeaningTable):
        self.doc = doc
        self.vis = vis
        self.table = table
        self._active_refs: set[int] = set()

    def _ctx(self, current: XMathNode, container: XMathNode | None) -> AscriptionContext:
        return AscriptionContext(self.doc, self.vis, current, Branch.CONTENT, container)

    def _token_target(
        self, built: TargetNode, current: XMathNode, container: XMathNode | None
    ) -> TargetNode:
        built.source = ascribe(self._ctx(current, container), False)
        built.branch = Branch.CONTENT
        built.origin = current
        return built

    def _container(
        self,
        element: str,
        children: list[TargetNode],
        current: XMathNode,
        container: XMathNode | None,
    ) -> TargetNode:
        node = TargetNode(element, {}, children)
        node.source = ascribe(self._ctx(current, container), True)
        node.branch = Branch.CONTENT
        node.origin = current
        return node

    def walk(self, node: XMathNode, container: XMathNode | None) -> TargetNode:
        kind = node.kind
        if kind is NodeKind.DUAL:
            return self.walk(node.children[0], node)
        if kind is NodeKind.REF:
            if node.index in self._active_refs:
                raise ReferenceCycleError("reference cycle via idref", node)
            self._active_refs.add(node.index)
            try:
                return self.walk(self.doc.resolve_ref(node), container)
            finally:
                self._active_refs.discard(node.index)
        if kind is NodeKind.TOK:
            return self._token_target(token_to_cmml(node, self.table), node, container)
        if kind is NodeKind.WRAP:
            name = node.attrs.xml_id or f"node {node.index}"
            raise ContentWrapError(
                f"XMWrap ({name}) is reachable from the content branch and has "
                "no content reading",
                node,
            )
        return self.apply(node, container)

    def apply(self, app: XMathNode, container: XMathNode | None) -> TargetNode:
        if not app.children:
            raise MalformedApplyError("XMApp without an operator", app)
        op_node = app.children[0]
        op = self.doc.deref(op_node)
        if op.kind is NodeKind.TOK and op.attrs.meaning in self.table.expansions:
            rule = self.table.expansions[op.attrs.meaning]
            return self.expand_pragmatic(rule, app, op, app.children[1:], container)
        children = [self.walk(child, container) for child in app.children]
        return self._container("apply", children, app, container)

    def expand_pragmatic(
        self,
        rule: ExpansionRule,
        app: XMathNode,
        op: XMathNode,
        args: list[XMathNode],
        container: XMathNode | None,
    ) -> TargetNode:
        if len(args) != rule.arity:
            raise ArityMismatchError(
                f"{rule.meaning} expects {rule.arity} arguments, found {len(args)}",
                app,
            )
        return self._instantiate(rule.template, app, op, args, container)

    def _instantiate(
        self,
        term: Term,
        app: XMathNode,
        op: XMathNode,
        args: list[XMathNode],
        container: XMathNode | None,
    ) -> TargetNode:
        tag = term[0]
        if tag == "head":
            return self._token_target(token_to_cmml(op, self.table), op, container)
        if tag == "slot":
            return self.walk(args[term[1] - 1], container)
        name, subterms = term[1], term[2]
        if not subterms:
            # A bare element atom is the operator's manifestation, like head.
            return self._token_target(TargetNode(name), op, container)
        children = [
            self._instantiate(sub, app, op, args, container) for sub in subterms
        ]
        return self._container(name, children, app, container)
