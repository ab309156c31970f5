"""HTTP prediction service and final-model training.

The deployed model is tuned and fitted on 100% of the dataset, written to
a model file, and served read-only: GET /api/v1/health, GET
/api/v1/schema, POST /api/v1/predict. Errors use one envelope,
{code, message, detail}. When a UI directory is supplied its static files
are mounted at the site root.
"""

from __future__ import annotations

from dataclasses import dataclass

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from .dataset import Dataset
from .errors import AvSafetyError, ConfigError, ModelError
from .metrics import confusion, metric_sample
from .models import TrainedModel, fit, model_version, save_model, validate_hyperparams
from .models.tune import MIN_PER_CLASS, tune
from .rng import derive_seed
from .schema import FeatureSchema, encode
from .dataset import class_counts


def train_final(
    dataset: Dataset, family: str, seed: int, out_path: str | None = None
) -> TrainedModel:
    """Tune on the full dataset (3-fold CV), then fit on every record.

    Writes the model file when out_path is given. Deterministic: the same
    (dataset, family, seed) produce identical file bytes.
    """
    if len(dataset) == 0:
        raise ModelError("cannot train a final model on an empty dataset")
    n_inc, n_ser = class_counts(dataset)
    if min(n_inc, n_ser) >= MIN_PER_CLASS:
        hp = tune(family, dataset, seed=derive_seed(seed, 0))
    else:
        hp = validate_hyperparams(family, {})
    model = fit(family, hp, dataset, seed=derive_seed(seed, 1))
    if out_path is not None:
        save_model(model, out_path)
    return model


def training_metrics(model: TrainedModel, dataset: Dataset):
    """Metrics of the model on its own training data (reporting aid)."""
    pred = model.predict_labels(dataset.X)
    return metric_sample(confusion([r.label for r in dataset.records], pred))


class ApiError(Exception):
    def __init__(self, status: int, code: str, message: str, detail=None):
        super().__init__(message)
        self.status = status
        self.code = code
        self.message = message
        self.detail = detail


class PredictRequest(BaseModel):
    selected_features: list[str]


@dataclass(frozen=True)
class ServiceContext:
    model: TrainedModel
    schema: FeatureSchema
    version: str


def create_app(
    model: TrainedModel, schema: FeatureSchema, ui_dir: str | None = None
) -> FastAPI:
    """Build the FastAPI app around one immutable model + schema pair.

    Raises:
        ConfigError: the model was trained against a different schema
            version than the one being served.
    """
    if model.schema_version != schema.version:
        raise ConfigError(
            f"model schema version {model.schema_version!r} does not match "
            f"served schema {schema.version!r}"
        )
    ctx = ServiceContext(model=model, schema=schema, version=model_version(model))
    app = FastAPI(title="avsafety", docs_url=None, redoc_url=None)

    # the UI may be served from any static host, so allow cross-origin reads
    from fastapi.middleware.cors import CORSMiddleware

    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["GET", "POST", "OPTIONS"],
        allow_headers=["*"],
    )

    @app.exception_handler(ApiError)
    async def _api_error(_: Request, exc: ApiError):
        return JSONResponse(
            status_code=exc.status,
            content={"code": exc.code, "message": exc.message, "detail": exc.detail},
        )

    @app.exception_handler(RequestValidationError)
    async def _validation_error(_: Request, exc: RequestValidationError):
        detail = [
            {"loc": [str(x) for x in err.get("loc", [])], "msg": err.get("msg", "")}
            for err in exc.errors()
        ]
        return JSONResponse(
            status_code=422,
            content={
                "code": "invalid_request",
                "message": "request body failed validation",
                "detail": detail,
            },
        )

    @app.get("/api/v1/health")
    async def health():
        return {"status": "ok", "model_version": ctx.version}

    @app.get("/api/v1/schema")
    async def schema_document():
        return ctx.schema.to_document()

    @app.post("/api/v1/predict")
    async def predict(body: PredictRequest):
        known = set(ctx.schema.feature_ids)
        unknown = [fid for fid in body.selected_features if fid not in known]
        if unknown:
            raise ApiError(
                status=422,
                code="unknown_feature",
                message=f"unknown feature id(s): {', '.join(sorted(set(unknown)))}",
                detail={"unknown_ids": sorted(set(unknown))},
            )
        vec = encode(ctx.schema, set(body.selected_features))
        score = ctx.model.predict_score(vec)
        label = ctx.model.predict(vec)
        return {
            "label": label.value,
            "score": score,
            "model_family": ctx.model.family,
            "model_version": ctx.version,
        }

    if ui_dir is not None:
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=ui_dir, html=True), name="ui")

    return app


def serve(
    model_path: str,
    schema_path: str | None,
    addr: str,
    ui_dir: str | None = None,
) -> None:
    """Load model + schema, refuse on version mismatch, and run uvicorn."""
    import uvicorn

    from .models import load_model
    from .schema import load_schema

    model = load_model(model_path)
    schema = load_schema(schema_path)
    app = create_app(model, schema, ui_dir=ui_dir)
    host, port = parse_addr(addr)
    uvicorn.run(app, host=host, port=port, log_level="warning")


def parse_addr(addr: str) -> tuple[str, int]:
    host, sep, port = addr.rpartition(":")
    if not sep or not port.isdigit():
        raise AvSafetyError(f"bad bind address {addr!r}, expected HOST:PORT")
    return host or "127.0.0.1", int(port)
