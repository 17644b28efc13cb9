"""Exception types shared across the library."""


class CqError(Exception):
    """Base class for all cqgraph errors."""


class ParseError(CqError):
    """Malformed concrete syntax (queries, terms, or file headers)."""


class SortError(CqError):
    """Ill-sorted diagram term: composition widths disagree."""


class SignatureError(CqError):
    """Bad signature, or a symbol used at the wrong sort."""


class ModelError(CqError):
    """Bad relational model, or operands over different carriers."""


class BudgetExhausted(CqError):
    """A morphism search ran out of its step budget.

    Distinct from a negative answer: the search was cancelled, not refuted.
    """
