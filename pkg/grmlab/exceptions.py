class AppError(Exception):
    """Base error: a stable snake_case code plus a human message."""

    status_code = 422
    code = "app_error"

    def __init__(self, message: str, code: str | None = None):
        super().__init__(message)
        self.message = message
        if code is not None:
            self.code = code

    @property
    def detail(self) -> dict:
        return {"code": self.code, "message": self.message}


# --- gf ---


class NonPrime(AppError):
    code = "non_prime"


class UnsupportedSize(AppError):
    code = "unsupported_size"


class ZeroInverse(AppError):
    code = "zero_inverse"


class EnumerationOverflow(AppError):
    code = "overflow"


# --- perm ---


class NotAPermutation(AppError):
    code = "not_a_permutation"


class DegreeTooLarge(AppError):
    code = "degree_too_large"


class DegreeMismatch(AppError):
    code = "degree_mismatch"


# --- channel ---


class InvalidChannel(AppError):
    code = "invalid_channel"


class InputSizeMismatch(AppError):
    code = "input_size_mismatch"


class InvalidPrior(AppError):
    code = "invalid_prior"


class TOutOfRange(AppError):
    code = "t_out_of_range"


class NotMarkov(AppError):
    code = "not_markov"


# --- grm ---


class DegreeOutOfRange(AppError):
    code = "degree_out_of_range"


class TooLarge(AppError):
    code = "too_large"


class KTooLarge(AppError):
    code = "k_too_large"


class EmptyIndexSet(AppError):
    code = "empty_index_set"


class InvalidIndexSet(AppError):
    code = "invalid_index_set"


class SingularMatrix(AppError):
    code = "singular_matrix"


class DegeneratePosition(AppError):
    code = "degenerate_position"


# --- coset ---


class TooLargeForExact(AppError):
    code = "too_large_for_exact"


class ZeroNotInS(AppError):
    code = "zero_not_in_s"


class NotTransitive(AppError):
    code = "not_transitive"


class IntersectionNotZero(AppError):
    code = "intersection_not_zero"


class ZeroMinPIC(AppError):
    code = "zero_min_pic"


class MTooSmall(AppError):
    code = "m_too_small"


# --- verify / cli ---


class UnknownCheck(AppError):
    code = "unknown_check"
    status_code = 404


class ConfigError(AppError):
    code = "config_error"
