"""Local-unitary gradient flows on multi-qubit pure states."""

from ._localflow import *  # noqa: F401,F403
from ._localflow import FlowError, FlowTrace, SchmidtForm  # noqa: F401

__version__ = "0.1.0"
