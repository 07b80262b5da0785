"""Loading of inline and @file JSON arguments."""
import json
import logging

from .const import LOGGER, FILE_ARGUMENT_PREFIX
from .pybgrisk import (
    InputValidationError,
    background_from_dict,
    gamble_from_dict,
    pair_from_dict,
)

_LOGGER = logging.getLogger(LOGGER)


class InputDocumentError(InputValidationError):
    """An argument could not be read or decoded as JSON."""


def load_json_file(full_path: str) -> dict:
    """Load a JSON document from a file."""
    _LOGGER.debug("Attempting to load JSON from file: %s", full_path)
    try:
        with open(full_path, 'r', encoding="utf-8") as file:
            returned_data = json.load(file)
    except FileNotFoundError as exc:
        _LOGGER.debug("File not found: %s", full_path)
        raise InputDocumentError(f"file not found: {full_path}") from exc
    except json.JSONDecodeError as exc:
        raise InputDocumentError(f"malformed JSON in {full_path}: {exc}") from exc
    _LOGGER.debug("Successfully loaded file: %s", full_path)
    return returned_data


def load_json_argument(value: str) -> dict:
    """Inline JSON, or a path prefixed with '@'."""
    if value.startswith(FILE_ARGUMENT_PREFIX):
        return load_json_file(value[len(FILE_ARGUMENT_PREFIX):])
    try:
        return json.loads(value)
    except json.JSONDecodeError as exc:
        raise InputDocumentError(f"malformed JSON argument: {exc}") from exc


def _require_object(document, what: str) -> dict:
    if not isinstance(document, dict):
        raise InputDocumentError(f"{what} must be a JSON object")
    return document


def load_gamble(value: str):
    return gamble_from_dict(_require_object(load_json_argument(value), "gamble"))


def load_background(value: str):
    return background_from_dict(_require_object(load_json_argument(value), "distribution"))


def load_pair(value: str):
    return pair_from_dict(_require_object(load_json_argument(value), "gamble pair"))
