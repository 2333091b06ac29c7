"""Exception hierarchy shared by every ringwalk module.

CLI exit-code mapping: InputError -> 2, ResourceCapError -> 3.
InternalCheckError signals a broken internal invariant (a bug), never bad input.
"""


class RingwalkError(Exception):
    """Base class for all ringwalk errors."""


class InputError(RingwalkError):
    """Malformed or unsupported user input (DSL text, element literals, options)."""


class DslSyntaxError(InputError):
    """Tokenizer/parser failure; carries a position for caret diagnostics."""

    def __init__(self, message: str, text: str = "", pos: int = -1):
        self.text = text
        self.pos = pos
        if pos >= 0 and text:
            caret = " " * pos + "^"
            message = f"{message}\n  {text}\n  {caret}"
        super().__init__(message)


class RingConstructionError(InputError):
    """The parsed expression does not describe a supported ring."""


class ResourceCapError(RingwalkError):
    """A configured size/enumeration cap was exceeded."""


class InternalCheckError(RingwalkError):
    """An internal mathematical invariant failed; indicates a bug, not bad input."""
