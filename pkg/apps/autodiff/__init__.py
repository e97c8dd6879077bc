from apps.autodiff.tensor import Graph
from apps.autodiff.tensor import Tensor
from apps.autodiff.tensor import active_graph
from apps.autodiff.tensor import backward
from apps.autodiff.gradcheck import GradCheckReport
from apps.autodiff.gradcheck import grad_check

__all__ = ['Graph', 'Tensor', 'active_graph', 'backward', 'GradCheckReport', 'grad_check']
