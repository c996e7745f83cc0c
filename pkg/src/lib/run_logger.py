# Run Logger
# Audit trail of CLI invocations in logs/sturmkit.log (one line per run or batch line)
# Also exports create_file_logger() for other log files
# Rotation: size cap from config, backups named {name}-{yyyyMMddHHmmss}.log

import os
import logging
from datetime import datetime
from pathlib import Path
from logging.handlers import RotatingFileHandler

from lib.config_loader import get_setting

# Project root = 2 levels up from src/lib/
PROJECT_ROOT = Path(__file__).parent.parent.parent

MAX_BYTES = 5 * 1024 * 1024  # 5MB
BACKUP_COUNT = 10


def _log_dir():
    configured = Path(get_setting("logging.dir", "logs"))
    return configured if configured.is_absolute() else PROJECT_ROOT / configured


def _make_timestamped_namer(base_name):
    """Create a namer function for rotated logs: base.log.1 → base-20260201210352.log"""
    stem = base_name.rsplit(".", 1)[0] if "." in base_name else base_name
    def namer(default_name):
        base_dir = os.path.dirname(default_name)
        stamp = datetime.now().strftime("%Y%m%d%H%M%S")
        return os.path.join(base_dir, f"{stem}-{stamp}.log")
    return namer


def _noop_rotator(source, dest):
    """Simple rename rotator for custom namer."""
    if os.path.exists(source):
        os.rename(source, dest)


def create_file_logger(name, filename, max_bytes=None, backup_count=None, log_dir=None):
    """Create a named logger that writes to {log_dir}/{filename} with rotation.

    Directory and limits default to the logging section of sturmkit.yaml.
    Idempotent: a logger that already has handlers is returned as is.
    """
    file_logger = logging.getLogger(name)
    if file_logger.handlers:
        return file_logger

    log_dir = Path(log_dir) if log_dir else _log_dir()
    os.makedirs(log_dir, exist_ok=True)

    file_logger.setLevel(logging.INFO)
    file_logger.propagate = False

    handler = RotatingFileHandler(
        str(log_dir / filename),
        maxBytes=max_bytes or int(get_setting("logging.max_bytes", MAX_BYTES)),
        backupCount=backup_count or int(get_setting("logging.backup_count", BACKUP_COUNT)),
        encoding="utf-8",
    )
    handler.namer = _make_timestamped_namer(filename)
    handler.rotator = _noop_rotator

    formatter = logging.Formatter(
        "[%(asctime)s] [%(levelname)s] %(message)s",
        datefmt="%Y-%m-%dT%H:%M:%S",
    )
    handler.setFormatter(formatter)
    file_logger.addHandler(handler)

    return file_logger


def make_run_auditor(file_logger):
    """Callback for cli.run(audit=...): one RUN line per invocation."""
    def audit(argv, exit_code, elapsed_ms):
        file_logger.info(f"RUN argv={list(argv)} exit={exit_code} elapsed_ms={elapsed_ms:.1f}")
    return audit
