"""Presentation MathML generation from the XMath tree.

The walk follows the presentation view: the second branch of every dual,
refs chasing to their targets, wraps and applications becoming rows. Every
produced node carries its ascribed source so the linker can wire xrefs.
"""

from __future__ import annotations

from .ascription import AscriptionContext, ascribe
from .errors import MalformedApplyError, ReferenceCycleError
from .glyphs import is_greek_capital, script_form
from .mml import TargetNode
from .model import Branch, NodeKind, XMathDocument, XMathNode
from .visibility import VisibilityMap

APPLY_FUNCTION = "⁡"
INVISIBLE_TIMES = "⁢"

#: Roles rendered as operator tokens (mo); everything else is mi/mn.
MO_ROLES = frozenset(
    {
        "OPEN",
        "CLOSE",
        "PUNCT",
        "ADDOP",
        "MULOP",
        "INTOP",
        "DIFFOP",
        "SUPERSCRIPTOP",
        "SUBSCRIPTOP",
    }
)

#: Roles laid out n-ary infix, one operator token per argument gap.
INFIX_ROLES = frozenset({"ADDOP", "MULOP", "RELOP", "BINOP"})

#: Large-operator roles; a display mathstyle on one of these promotes the
#: whole formula to display="block".
LARGEOP_ROLES = frozenset({"INTOP", "SUMOP", "BIGOP", "LIMITOP"})

_DIGITS = frozenset("0123456789")


def token_to_pmml(tok: XMathNode) -> TargetNode:
    """Map one token to its presentation element, attributes and text.

    Operator roles give mo; identifier-like roles give mi, or mn when the
    text is all digits. Fonts translate as: italic is the default for
    single-letter identifiers (no attribute), "normal" and upright Greek
    capitals force mathvariant="normal", and calligraphic letters move to
    their script code points with the ltx class. mathstyle is handled at
    the math level, not here.
    """
    role = tok.attrs.role
    text = tok.text or ""
    if role in MO_ROLES:
        element = "mo"
    elif text and all(ch in _DIGITS for ch in text):
        element = "mn"
    else:
        element = "mi"

    attrs: dict[str, str] = {}
    font = tok.attrs.font
    if element == "mi":
        if font == "caligraphic":
            attrs["class"] = "ltx_font_mathcaligraphic"
            text = script_form(text)
        elif font == "normal" or (font is None and is_greek_capital(text)):
            attrs["mathvariant"] = "normal"
        elif font == "italic" and len(text) > 1:
            attrs["mathvariant"] = "italic"
    if tok.attrs.stretchy is not None:
        attrs["stretchy"] = "true" if tok.attrs.stretchy else "false"
    if role == "INTOP":
        attrs["largeop"] = "true"
        attrs["symmetric"] = "true"
    if role in ("OPEN", "CLOSE") and tok.attrs.stretchy:
        attrs["fence"] = "true"
    return TargetNode(element, attrs, text=text)


def gen_pmml(doc: XMathDocument, vis: VisibilityMap) -> TargetNode:
    """Generate the presentation tree for a whole document."""
    return _Walk(doc, vis).walk(doc.root, None)


class _Walk:
    def __init__(self, doc: XMathDocument, vis: VisibilityMap):
        self.doc = doc
        self.vis = vis
        self._active_refs: set[int] = set()

    # -- ascription plumbing ------------------------------------------------

    def _ctx(self, current: XMathNode, container: XMathNode | None) -> AscriptionContext:
        return AscriptionContext(
            self.doc, self.vis, current, Branch.PRESENTATION, container
        )

    def _token_target(
        self, built: TargetNode, current: XMathNode, container: XMathNode | None
    ) -> TargetNode:
        built.source = ascribe(self._ctx(current, container), False)
        built.branch = Branch.PRESENTATION
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
        node.branch = Branch.PRESENTATION
        node.origin = current
        return node

    # -- walk ---------------------------------------------------------------

    def walk(self, node: XMathNode, container: XMathNode | None) -> TargetNode:
        kind = node.kind
        if kind is NodeKind.DUAL:
            return self.walk(node.children[1], node)
        if kind is NodeKind.REF:
            if node.index in self._active_refs:
                raise ReferenceCycleError("reference cycle via idref", node)
            self._active_refs.add(node.index)
            try:
                # The ref's own container stays in force for the subtree.
                return self.walk(self.doc.resolve_ref(node), container)
            finally:
                self._active_refs.discard(node.index)
        if kind is NodeKind.TOK:
            return self._token_target(token_to_pmml(node), node, container)
        if kind is NodeKind.WRAP:
            children = [self.walk(child, container) for child in node.children]
            return self._container("mrow", children, node, container)
        return self.apply(node, container)

    def apply(self, app: XMathNode, container: XMathNode | None) -> TargetNode:
        if not app.children:
            raise MalformedApplyError("XMApp without an operator", app)
        op_node = app.children[0]
        args = app.children[1:]
        op = self.doc.deref(op_node)
        role = op.attrs.role if op.kind is NodeKind.TOK else None

        if role in ("SUPERSCRIPTOP", "SUBSCRIPTOP") and len(args) == 2:
            return self._script(app, op, args, container)
        if role == "FUNCTION":
            af = TargetNode("mo", text=APPLY_FUNCTION)
            children = [self.walk(op_node, container)]
            children.append(self._token_target(af, app, container))
            children.extend(self.walk(arg, container) for arg in args)
            return self._container("mrow", children, app, container)
        if role in INFIX_ROLES and len(args) >= 2:
            children = []
            for i, arg in enumerate(args):
                if i:
                    children.append(self._infix_operator(op, container))
                children.append(self.walk(arg, container))
            return self._container("mrow", children, app, container)
        # Prefix layout covers differential operators, large operators and
        # applications whose operator is itself a compound.
        children = [self.walk(op_node, container)]
        children.extend(self.walk(arg, container) for arg in args)
        return self._container("mrow", children, app, container)

    def _infix_operator(
        self, op: XMathNode, container: XMathNode | None
    ) -> TargetNode:
        built = token_to_pmml(op)
        if not built.text and op.attrs.role == "MULOP" and op.attrs.meaning == "times":
            built.text = INVISIBLE_TIMES
        return self._token_target(built, op, container)

    def _script(
        self,
        app: XMathNode,
        op: XMathNode,
        args: list[XMathNode],
        container: XMathNode | None,
    ) -> TargetNode:
        base, script = args
        if op.attrs.role == "SUPERSCRIPTOP":
            fused = self._try_fuse(app, op, base, script, container)
            if fused is not None:
                return fused
            element = "msup"
        else:
            element = "msub"
        children = [self.walk(base, container), self.walk(script, container)]
        return self._container(element, children, app, container)

    def _try_fuse(
        self,
        app: XMathNode,
        op: XMathNode,
        base: XMathNode,
        script: XMathNode,
        container: XMathNode | None,
    ) -> TargetNode | None:
        """msub nested under msup collapses to msubsup (compatible scripts).

        The script operator tokens themselves never produce output.
        """
        inner = self.doc.deref(base)
        if inner.kind is not NodeKind.APP or len(inner.children) != 3:
            return None
        inner_op = self.doc.deref(inner.children[0])
        if inner_op.kind is not NodeKind.TOK or inner_op.attrs.role != "SUBSCRIPTOP":
            return None
        if inner_op.attrs.scriptpos != op.attrs.scriptpos:
            return None
        children = [
            self.walk(inner.children[1], container),
            self.walk(inner.children[2], container),
            self.walk(script, container),
        ]
        return self._container("msubsup", children, app, container)
