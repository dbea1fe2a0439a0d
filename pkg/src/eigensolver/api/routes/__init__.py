from .health import router as health
from .solve import router as solve
