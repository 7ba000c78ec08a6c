from .config import (BuildConfig, RunConfig, ScanCommandConfig, SimulateConfig, VerifyConfig, load_config,
                     parse_overrides)
