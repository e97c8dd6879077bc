from apps.evaluation.forecast import Forecast
from apps.evaluation.forecast import evaluate
from apps.evaluation.forecast import forecast_split
from apps.evaluation.forecast import predictions_frame
