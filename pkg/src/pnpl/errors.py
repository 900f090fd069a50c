"""Exception hierarchy shared by every module of the package."""


class PnplError(Exception):
    """Base class for all errors raised by pnpl."""


class FormulaSyntaxError(PnplError):
    def __init__(self, message, text, position):
        self.text = text
        self.position = position
        super().__init__(f"{message} at position {position} in {text!r}")


class UndeclaredFeatureError(PnplError):
    def __init__(self, name, line=None):
        self.name = name
        self.line = line
        where = "" if line is None else f"line {line}: "
        super().__init__(f"{where}undeclared feature {name!r}")


class FeatureModelError(PnplError):
    """Structural problem in a feature model or an unsatisfiable constraint set."""


class EnumerationLimitError(PnplError):
    def __init__(self, n_features, limit):
        self.n_features = n_features
        self.limit = limit
        super().__init__(
            f"feature model has {n_features} features, enumeration limit is {limit}"
        )


class InvalidConfigurationError(PnplError):
    pass


class NotEnabledError(PnplError):
    pass


class ModelError(PnplError):
    """Model file could not be parsed or failed validation."""

    def __init__(self, message, line=None, column=None, issues=()):
        self.line = line
        self.column = column
        self.issues = list(issues)
        where = ""
        if line is not None:
            where = f"line {line}"
            if column is not None:
                where += f", column {column}"
            where += ": "
        super().__init__(where + message)


class LimitExceeded(PnplError):
    """Exploration stopped by a state or token guard."""


class StateLimitExceeded(LimitExceeded):
    def __init__(self, states, limit):
        self.states = states
        self.limit = limit
        super().__init__(f"state limit exceeded: {states} states > {limit}")


class TokenLimitExceeded(LimitExceeded):
    def __init__(self, place, tokens, limit):
        self.place = place
        self.tokens = tokens
        self.limit = limit
        super().__init__(
            f"token limit exceeded: place {place!r} holds {tokens} tokens > {limit}"
        )
