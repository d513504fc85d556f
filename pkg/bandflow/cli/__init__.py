from .config import RunConfig, load_config, parse_config # noqa: F401
from .main import build_suite, main # noqa: F401
from .sweep import SweepSpec, run_sweep # noqa: F401
