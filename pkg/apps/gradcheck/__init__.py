from apps.gradcheck.checks import GradCheckSuite
from apps.gradcheck.checks import micro_config
from apps.gradcheck.checks import run_gradcheck
