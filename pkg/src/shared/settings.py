# src/shared/settings.py

from __future__ import annotations

import logging
import os
from pathlib import Path
from typing import Literal

from dotenv import load_dotenv
from pydantic import BaseModel, Field, ValidationError, field_validator

from src.shared.errors import MvopError

PROJECT_ROOT = Path(__file__).resolve().parents[2]
DEFAULT_BUNDLE_DIR = PROJECT_ROOT / "evaluation" / "bundles"

LogMode = Literal["quiet", "info", "debug"]

_LOG_LEVELS = {"quiet": logging.WARNING, "info": logging.INFO, "debug": logging.DEBUG}


class SettingsError(MvopError):
    """An MVOP_* environment variable holds an unusable value."""


class Settings(BaseModel):
    """
    Runtime configuration read from the environment (and .env):

      MVOP_LOG         quiet | info | debug   (default quiet)
      MVOP_N_VERIFY    algebra-search re-verification depth (default 5)
      MVOP_BUNDLE_DIR  directory of bundled example files
    """

    log: LogMode = "quiet"
    n_verify: int = Field(default=5, ge=0)
    bundle_dir: Path = DEFAULT_BUNDLE_DIR

    @field_validator("log", mode="before")
    @classmethod
    def _normalize_log(cls, value: object) -> object:
        return value.strip().lower() if isinstance(value, str) else value

    @property
    def log_level(self) -> int:
        return _LOG_LEVELS[self.log]


def load_settings() -> Settings:
    """load_dotenv() then read MVOP_* variables; unset variables keep their defaults."""
    load_dotenv()
    raw = {
        "log": os.getenv("MVOP_LOG"),
        "n_verify": os.getenv("MVOP_N_VERIFY"),
        "bundle_dir": os.getenv("MVOP_BUNDLE_DIR"),
    }
    try:
        return Settings.model_validate({k: v for k, v in raw.items() if v not in (None, "")})
    except ValidationError as exc:
        first = exc.errors()[0]
        name = "MVOP_" + str(first["loc"][0]).upper()
        raise SettingsError(f"{name}: {first['msg']}") from exc


def configure_logging(settings: Settings) -> None:
    logging.basicConfig(
        level=settings.log_level,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        force=True,
    )
