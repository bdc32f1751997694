import typer
from modules.V1.v1routers import router as v1_router


def routers(app: typer.Typer):
    app.add_typer(v1_router)
