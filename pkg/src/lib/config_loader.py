"""
Configuration loader with mtime-based Hot-Reload.
src/lib/config_loader.py

Loads src/config/sturmkit.yaml. Caches by file mtime, so edits are picked
up on the next call. Missing keys fall back to built-in defaults, and
STURMKIT_PRECISION (environment or .env) overrides the default precision.
"""

import os
import copy
import yaml
import logging

logger = logging.getLogger(__name__)

PRECISION_ENV = "STURMKIT_PRECISION"

# ─────────────────────────────────────────────────────────────────────────────
# Cache storage
# ─────────────────────────────────────────────────────────────────────────────

_cache = {}  # path → { "mtime": float, "data": any }

_CONFIG_DIR = os.path.join(os.path.dirname(os.path.dirname(__file__)), "config")
_CONFIG_FILE = "sturmkit.yaml"


def _get_path(*parts):
    return os.path.join(_CONFIG_DIR, *parts)


def _load_yaml_with_cache(filepath):
    """Read and parse YAML file if mtime changed."""
    if not os.path.exists(filepath):
        logger.error(f"[ConfigLoader] File not found: {filepath}")
        return None

    mtime = os.path.getmtime(filepath)
    cached = _cache.get(filepath)

    if cached and cached["mtime"] == mtime:
        return cached["data"]

    try:
        with open(filepath, "r", encoding="utf-8") as f:
            data = yaml.safe_load(f)
    except (OSError, yaml.YAMLError) as e:
        logger.error(f"[ConfigLoader] Unreadable {os.path.basename(filepath)}: {e}")
        return None

    basename = os.path.basename(filepath)
    if cached:
        logger.info(f"[ConfigLoader] Reloaded: {basename}")
    else:
        logger.info(f"[ConfigLoader] Loaded: {basename}")

    _cache[filepath] = {"mtime": mtime, "data": data}
    return data


def _merge(defaults, overrides):
    merged = copy.deepcopy(defaults)
    for key, value in (overrides or {}).items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = _merge(merged[key], value)
        else:
            merged[key] = value
    return merged


# ─────────────────────────────────────────────────────────────────────────────
# Public API
# ─────────────────────────────────────────────────────────────────────────────

def load_sturmkit_config(path=None):
    """
    Load configuration from src/config/sturmkit.yaml (or an explicit path).

    Returns dict with keys: precision, search, logging. File values are
    merged over the defaults; the precision environment override is applied last.
    """
    filepath = path or _get_path(_CONFIG_FILE)
    data = _load_yaml_with_cache(filepath)
    if not isinstance(data, dict):
        logger.error(f"[ConfigLoader] Failed to load {os.path.basename(filepath)}, using defaults")
        data = {}
    config = _merge(_default_sturmkit_config(), data)

    env_digits = os.environ.get(PRECISION_ENV)
    if env_digits:
        try:
            config["precision"]["default_digits"] = int(env_digits)
        except ValueError:
            logger.warning(f"[ConfigLoader] Ignoring non-integer {PRECISION_ENV}={env_digits!r}")
    return config


def get_setting(dotted, default=None):
    """Dotted lookup into the loaded config: get_setting("search.keane_depth")."""
    node = load_sturmkit_config()
    for part in dotted.split("."):
        if not isinstance(node, dict) or part not in node:
            return default
        node = node[part]
    return node


def _default_sturmkit_config():
    """Fallback defaults if config file is missing."""
    return {
        "precision": {
            "default_digits": 50,
            "max_digits": 10000,
        },
        "search": {
            "denjoy_k_bound": 6,
            "keane_depth": 200,
            "rauzy_depth": 200,
            "ies_word_depth": 3,
            "eventual_n_max": 12,
            "induce_iter_cap": 100000,
        },
        "logging": {
            "dir": "logs",
            "file": "sturmkit.log",
            "max_bytes": 5 * 1024 * 1024,
            "backup_count": 10,
            "level": "INFO",
        },
    }
