import logging
from dataclasses import dataclass, field
from typing import Callable, List, Tuple

import numpy as np

from src.utils.errors import TrainingError

from .optim import Optimizer

logger = logging.getLogger(__name__)

LossFn = Callable[[List[np.ndarray]], Tuple[float, List[np.ndarray]]]


@dataclass
class TrainingLog:
    losses: List[float] = field(default_factory=list)
    stopped_early: bool = False

    @property
    def epochs(self) -> int:
        return len(self.losses)

    @property
    def final_loss(self) -> float:
        return self.losses[-1] if self.losses else float("nan")


def train_full_batch(params: List[np.ndarray], loss_and_grads: LossFn, optimizer: Optimizer,
                     epochs: int, patience: int = 50, tol: float = 1e-7, name: str = "model") -> TrainingLog:
    """
    Full-batch gradient training. Stops after `patience` epochs without an
    improvement larger than `tol`; raises TrainingError on a non-finite loss.
    """
    log = TrainingLog()
    best = np.inf
    stale = 0
    for epoch in range(1, epochs + 1):
        loss, grads = loss_and_grads(params)
        if not np.isfinite(loss) or not all(np.all(np.isfinite(g)) for g in grads):
            raise TrainingError(f"{name} diverged (loss={loss})", epoch=epoch)
        log.losses.append(loss)
        optimizer.step(params, grads)
        if loss < best - tol:
            best = loss
            stale = 0
        else:
            stale += 1
            if stale >= patience:
                log.stopped_early = True
                break
    logger.debug(f"{name}: trained {log.epochs} epochs, final loss {log.final_loss:.6g}")
    return log
