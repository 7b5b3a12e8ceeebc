from typing import Optional


class GlselectError(Exception):
    """Base class for every error raised by glselect."""


class ConfigError(GlselectError):
    """Invalid command-line usage or configuration values."""


class DataError(GlselectError):
    """Malformed or inconsistent input data."""

    def __init__(self, message: str, path: Optional[str] = None, line: Optional[int] = None,
                 column: Optional[str] = None):
        self.path = path
        self.line = line
        self.column = column
        location = []
        if path:
            location.append(str(path))
        if line is not None:
            location.append(f"line {line}")
        if column is not None:
            location.append(f"column {column}")
        if location:
            message = f"{message} ({', '.join(location)})"
        super().__init__(message)


class ProtocolError(DataError):
    """A testbed protocol was violated, e.g. a test row with unobserved entries."""

    def __init__(self, message: str, testbed: Optional[str] = None, fold: Optional[int] = None,
                 graph_id: Optional[str] = None):
        self.testbed = testbed
        self.fold = fold
        self.graph_id = graph_id
        context = []
        if testbed:
            context.append(f"testbed={testbed}")
        if fold is not None:
            context.append(f"fold={fold}")
        if graph_id is not None:
            context.append(f"graph={graph_id}")
        if context:
            message = f"{message} [{' '.join(context)}]"
        super().__init__(message)


class TrainingError(GlselectError):
    """A gradient-trained selector diverged."""

    def __init__(self, message: str, epoch: Optional[int] = None):
        self.epoch = epoch
        if epoch is not None:
            message = f"{message} at epoch {epoch}"
        super().__init__(message)
