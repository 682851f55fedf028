from .boundary import boundary
from .degrade import degrade
from .entropy import entropy
from .evaluate import evaluate
from .experiment import experiment
from .report import report
from .simulate import simulate
from .train import train
