from . import common
from . import error

from .config import ExperimentConfigDict, FamilyDict, OutputDict
from .report import ReportRowDict, CertificateDict
