from apps.forecaster.model import Forecaster
from apps.forecaster.model import PARAMETER_GROUPS
