import typer

from modules.V1.corephysics.routers import router as csl_router
from modules.V1.gammashielding.routers import router as gamma_router
from modules.V1.muonbackground.routers import router as muon_router
from modules.V1.sensitivity.routers import router as sensitivity_router
from modules.V1.thermalbolometer.routers import router as bolometer_router


router = typer.Typer()

router.add_typer(csl_router)
router.add_typer(gamma_router)
router.add_typer(muon_router)
router.add_typer(sensitivity_router)
router.add_typer(bolometer_router)
