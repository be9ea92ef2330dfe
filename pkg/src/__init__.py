# Initialize package
from . import config
from . import exceptions
from . import models
from . import graph
from . import hop_metric
from . import reconstruct
from . import solver
from . import evaluation
from . import pipeline
from . import cli

__version__ = '1.0.0'
