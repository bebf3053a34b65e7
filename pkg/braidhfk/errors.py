from . import constants as C


class BraidHFKError(Exception):
    exit_code = C.EXIT_INPUT_ERROR


class InputError(BraidHFKError, ValueError):
    """Malformed words, fixtures, grids or dimension mismatches."""
    exit_code = C.EXIT_INPUT_ERROR


class ResourceError(BraidHFKError):
    """A configured budget (grid size, window size, step count) was exceeded."""
    exit_code = C.EXIT_RESOURCE_ERROR

    def __init__(self, message, attempted=None, budget=None):
        super().__init__(message)
        self.attempted = attempted
        self.budget = budget


class UnsupportedError(BraidHFKError):
    exit_code = C.EXIT_INPUT_ERROR


class TheoremShadowViolation(BraidHFKError):
    """A corpus row contradicted a statement that must hold for every input."""
    exit_code = C.EXIT_THEOREM_SHADOW

    def __init__(self, message, row=None):
        super().__init__(message)
        self.row = row
