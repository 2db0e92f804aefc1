import pytest

from chebquad.cli.runner import VerificationError
from chebquad.construct.moment import WeightVanishesError
from chebquad.construct.solver import ConvergenceError
from chebquad.errors import ChebQuadError, PreconditionError
from chebquad.shared import FitError
from chebquad.trig.norms import NodeCountError
from chebquad.trig.poly import DegreeCapError
from chebquad.weight.doubling import NotDoublingError
from chebquad.weight.integrate import IntegrationError


@pytest.mark.parametrize(
    "error",
    [
        PreconditionError("bad"),
        IntegrationError("no panel converged", achieved_error=1e-3),
        NotDoublingError(0.0, 0.1),
        WeightVanishesError("bad"),
        DegreeCapError("bad"),
        NodeCountError("bad"),
        ConvergenceError("no restart verified", best_residual=1e-3),
        FitError("bad"),
        VerificationError("bad"),
    ],
)
def test_every_error_is_a_chebquad_error(error: Exception) -> None:
    assert isinstance(error, ChebQuadError)
