from .confusion import ConfusionMatrix, DecisionVector
from .congruence import CongruenceTable, congruence, congruence_columns
from .regression import LinearModelFit, MinModelCheck, fit_ols, min_model_check
