"""Model persistence and the HTTP scoring service.

Model files are versioned JSON with explicit field names: human-auditable,
language-portable, and loss-free (floats serialize via repr round-trip).
The service loads one model at startup, holds it immutable for the process
lifetime, and scores passwords over three endpoints:

    POST /v1/score   {"password": str} -> ScoreResponse | 422 validation error
    GET  /v1/model   model metadata (kind, hyperparams, training metadata)
    GET  /healthz    liveness probe

Submitted passwords are never logged or persisted; access logs carry only
method, path, and status.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

import numpy as np

from .chars import is_legal_password
from .corpus import DEFAULT_MAX_LENGTH, DEFAULT_MIN_LENGTH
from .features import (
    FEATURE_NAMES,
    ScalerParams,
    extract_features,
    failed_rules,
    label,
    scale_rows,
)
from .learn import MODEL_KINDS, TrainedModel, _ESTIMATOR_TYPES

FORMAT_VERSION = 1

logger = logging.getLogger("pwlab.service")


class ModelFileError(ValueError):
    """A model file cannot be loaded: malformed, wrong version, or inconsistent."""


class ValidationError(ValueError):
    """A submitted password violates a corpus rule."""

    def __init__(self, message: str, rule: str):
        super().__init__(message)
        self.rule = rule


def save_model(model: TrainedModel) -> bytes:
    """Serialize a trained model; load_model(save_model(m)) predicts
    identically to m on any input."""
    doc = {
        "format_version": FORMAT_VERSION,
        "model_kind": model.kind,
        "hyperparams": model.hyperparams,
        "scaler": model.scaler.to_dict(),
        "parameters": model.estimator.to_dict(),
        "training_metadata": model.metadata,
    }
    return (json.dumps(doc, indent=2) + "\n").encode("utf-8")


def load_model(data: bytes) -> TrainedModel:
    try:
        doc = json.loads(data.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as e:
        raise ModelFileError(f"model file is not valid JSON: {e}") from e
    if not isinstance(doc, dict) or "format_version" not in doc:
        raise ModelFileError("model file lacks a format_version field")
    if doc["format_version"] != FORMAT_VERSION:
        raise ModelFileError(
            f"unsupported model file version {doc['format_version']!r}; "
            f"this build reads version {FORMAT_VERSION}"
        )
    try:
        kind = doc["model_kind"]
        if kind not in MODEL_KINDS:
            raise ModelFileError(f"unknown model kind {kind!r}")
        estimator = _ESTIMATOR_TYPES[kind].from_dict(doc["parameters"])
        scaler = ScalerParams.from_dict(doc["scaler"])
        metadata = dict(doc.get("training_metadata", {}))
    except ModelFileError:
        raise
    except Exception as e:
        raise ModelFileError(f"malformed model payload: {e}") from e
    arity = _estimator_arity(kind, estimator)
    if arity is not None and arity != len(scaler.mean):
        raise ModelFileError(
            f"scaler arity {len(scaler.mean)} does not match model arity {arity}"
        )
    return TrainedModel(kind=kind, estimator=estimator, scaler=scaler, metadata=metadata)


def _estimator_arity(kind: str, estimator) -> int | None:
    if kind == "lr":
        return len(estimator.weights)
    if kind == "svm":
        return estimator.n_features_
    if kind == "mlp":
        return estimator.weights[0].shape[0]
    if kind == "stack":
        return estimator.svm.n_features_
    return None  # trees do not record their arity


@dataclass(frozen=True)
class ScoreResponse:
    label: str
    probability: float | None
    features: dict[str, int]
    rule_label: str
    failed_rules: list[str]

    def to_dict(self) -> dict:
        doc = {
            "label": self.label,
            "features": self.features,
            "rule_label": self.rule_label,
            "failed_rules": self.failed_rules,
        }
        if self.probability is not None:
            doc["probability"] = self.probability
        return doc


def validate_password(password: str) -> None:
    n = len(password)
    if n < DEFAULT_MIN_LENGTH or n > DEFAULT_MAX_LENGTH:
        raise ValidationError(
            f"password length {n} outside [{DEFAULT_MIN_LENGTH}, {DEFAULT_MAX_LENGTH}]",
            rule="length_out_of_range",
        )
    if not is_legal_password(password):
        raise ValidationError(
            "password contains characters outside printable ASCII 0x21-0x7E",
            rule="illegal_character",
        )


def score(password: str, model: TrainedModel) -> ScoreResponse:
    """Extract features, apply the model's own scaler, predict, and attach
    the deterministic rule diagnosis."""
    validate_password(password)
    fv = extract_features(password)
    row = np.array([fv.as_row()], dtype=np.float64)
    scaled = scale_rows(row, model.scaler)
    pred = int(model.predict(scaled)[0])
    proba = model.predict_proba(scaled)
    return ScoreResponse(
        label="strong" if pred == 1 else "weak",
        probability=None if proba is None else float(proba[0]),
        features=dict(zip(FEATURE_NAMES, fv.as_row())),
        rule_label="strong" if label(fv) == 1 else "weak",
        failed_rules=failed_rules(fv),
    )


def model_info(model: TrainedModel) -> dict:
    """Metadata echo for GET /v1/model; never includes raw parameters."""
    return {
        "format_version": FORMAT_VERSION,
        "model_kind": model.kind,
        "hyperparams": model.hyperparams,
        "training_metadata": model.metadata,
    }


class _Handler(BaseHTTPRequestHandler):
    server_version = "pwlab"

    # the default implementation logs the request line; ours never carries a
    # body so passwords cannot leak into logs
    def log_message(self, format: str, *args) -> None:
        logger.info("%s", format % args)

    def _send_json(self, status: int, doc: dict) -> None:
        body = json.dumps(doc).encode("utf-8")
        self.send_response(status)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(body)))
        self._cors_headers()
        self.end_headers()
        self.wfile.write(body)

    def _cors_headers(self) -> None:
        origin = self.server.cors_origin
        if origin:
            self.send_header("Access-Control-Allow-Origin", origin)

    def do_OPTIONS(self) -> None:
        self.send_response(204)
        self._cors_headers()
        self.send_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS")
        self.send_header("Access-Control-Allow-Headers", "Content-Type")
        self.send_header("Content-Length", "0")
        self.end_headers()

    def do_GET(self) -> None:
        if self.path == "/healthz":
            body = b"ok"
            self.send_response(200)
            self.send_header("Content-Type", "text/plain")
            self.send_header("Content-Length", str(len(body)))
            self._cors_headers()
            self.end_headers()
            self.wfile.write(body)
        elif self.path == "/v1/model":
            self._send_json(200, model_info(self.server.model))
        else:
            self._send_json(404, {"error": "not found"})

    def do_POST(self) -> None:
        if self.path != "/v1/score":
            self._send_json(404, {"error": "not found"})
            return
        try:
            length = int(self.headers.get("Content-Length", 0))
            doc = json.loads(self.rfile.read(length).decode("utf-8"))
            password = doc["password"]
            if not isinstance(password, str):
                raise TypeError("password must be a string")
        except Exception:
            self._send_json(422, {"error": "body must be JSON {\"password\": string}", "rule": "request"})
            return
        try:
            response = score(password, self.server.model)
        except ValidationError as e:
            self._send_json(422, {"error": str(e), "rule": e.rule})
            return
        self._send_json(200, response.to_dict())


class ScoringServer(ThreadingHTTPServer):
    """HTTP server holding one immutable model for its whole lifetime."""

    daemon_threads = False  # drain in-flight requests on close

    def __init__(self, address: tuple[str, int], model: TrainedModel, cors_origin: str | None = None):
        super().__init__(address, _Handler)
        self.model = model
        self.cors_origin = cors_origin


def create_server(
    model: TrainedModel, host: str = "127.0.0.1", port: int = 8787, cors_origin: str | None = None
) -> ScoringServer:
    return ScoringServer((host, port), model, cors_origin)
