"""Exception hierarchy shared by the library and the CLI.

Every error carries a machine-readable ``reason`` code; the CLI turns it into
the ``{"error": {"reason": ..., "message": ...}}`` object it prints.
"""


class HGMError(Exception):
    """Base class for all precondition and computation failures."""

    reason = 'error'

    def __init__(self, message, **details):
        super().__init__(message)
        self.message = message
        self.details = details

    def to_dict(self):
        out = {'reason': self.reason, 'message': self.message}
        if self.details:
            out['details'] = {k: str(v) for k, v in self.details.items()}
        return out


class ParseError(HGMError):
    reason = 'parse_error'


class NonGenericError(HGMError):
    reason = 'non_generic'


class RankError(HGMError):
    reason = 'rank_unsupported'


class WildPrimeError(HGMError):
    reason = 'wild_prime'


class TamePrimeError(HGMError):
    reason = 'tame_prime'


class DegenerateParameterError(HGMError):
    reason = 'degenerate_parameter'


class NotStableError(HGMError):
    reason = 'not_q_stable'


class FieldSizeError(HGMError):
    reason = 'field_too_large'


class PrecisionError(HGMError):
    reason = 'precision_cap'


class PrecisionLossError(HGMError):
    reason = 'precision_lost'


class EmbeddingError(HGMError):
    reason = 'embedding_unavailable'


class ConductorMismatchError(HGMError):
    reason = 'conductor_mismatch'


class RecognitionError(HGMError):
    reason = 'recognition_failed'


class FormulaInapplicableError(HGMError):
    reason = 'formula_inapplicable'


class CongruencePreconditionError(HGMError):
    reason = 'not_congruent'


class UnsupportedOptionError(HGMError):
    reason = 'seed_unsupported'


class GradingError(HGMError):
    reason = 'non_integral_valuation'


class InvalidArgumentError(HGMError):
    reason = 'invalid_argument'
