# -*- coding: utf-8 -*-
from apps.autodiff import functions as F
from apps.autodiff.tensor import Tensor
from config.exceptions import DimensionError


def mse_loss(pred: Tensor, target: Tensor) -> Tensor:
    """Media del error cuadrático sobre las n·m entradas; 1×1 y diferenciable."""
    if pred.shape != target.shape:
        raise DimensionError(f'mse_loss: predicción {pred.shape} y objetivo {target.shape} no coinciden')
    diff = F.sub(pred, target)
    return F.mean_all(F.mul(diff, diff))
