"""Read-only HTTP/JSON facade over one loaded index.

The index is loaded once before the listener opens and never mutated, so
any number of concurrent requests can read it without locks. Batches are
atomic: one bad id fails the whole request. Floats go out at full double
precision.

Run with flags or environment (SSM_INDEX, SSM_LISTEN):

    python -m ontosim.service --index toy.idx --listen 127.0.0.1:8077
"""

from __future__ import annotations

import argparse
import os
import sys
from concurrent.futures import ThreadPoolExecutor

from fastapi import FastAPI, Query, Request
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from .errors import UnknownConceptError, UnknownMeasureError
from .index import OntologyIndex, load_index, pair_stats
from .measures import ALL_MEASURES, MeasureId, _score, pair_scores, parse_measure

DEFAULT_MAX_BATCH = 10_000
DEFAULT_LISTEN = "127.0.0.1:8077"

_BATCH_CHUNK = 2048


class BatchRequest(BaseModel):
    measure: str | None = None
    measures: list[str] | None = None
    pairs: list[tuple[str, str]] = Field(default_factory=list)


def _error(status: int, message: str) -> JSONResponse:
    return JSONResponse(status_code=status, content={"error": message})


def create_app(index: OntologyIndex, max_batch: int = DEFAULT_MAX_BATCH,
               workers: int = 1) -> FastAPI:
    app = FastAPI(title="ontosim", docs_url=None, redoc_url=None)

    @app.exception_handler(UnknownMeasureError)
    async def _measure_handler(request: Request, exc: UnknownMeasureError):
        return _error(400, str(exc))

    @app.exception_handler(UnknownConceptError)
    async def _concept_handler(request: Request, exc: UnknownConceptError):
        return _error(404, str(exc))

    @app.get("/health")
    def health():
        return {
            "status": "ok",
            "conceptCount": index.concept_count,
            "maxDepth": index.max_depth,
            "maxIc": index.max_ic,
            "indexVersion": index.version,
        }

    @app.get("/similarity")
    def similarity_endpoint(m: str, c1: str, c2: str):
        measure = parse_measure(m)
        scores = pair_scores(index, c1, c2, [measure])
        return {"measure": measure.value, "c1": c1, "c2": c2,
                "score": scores[0]}

    @app.post("/batch")
    def batch_endpoint(body: BatchRequest):
        names = body.measures if body.measures is not None else (
            [body.measure] if body.measure else [])
        if not names:
            return _error(400, "no measure given")
        wanted = {parse_measure(n) for n in names}
        ordered = [m for m in ALL_MEASURES if m in wanted]
        if len(body.pairs) > max_batch:
            return _error(413, f"batch of {len(body.pairs)} pairs exceeds "
                               f"the limit of {max_batch}")
        unresolved = sorted({cid for pair in body.pairs for cid in pair
                             if not index.has_concept(cid)})
        if unresolved:
            return _error(404, "unknown concept ids: " + ", ".join(unresolved))

        def run_chunk(chunk):
            out = []
            for c1, c2 in chunk:
                for measure, score in zip(
                        ordered, pair_scores(index, c1, c2, ordered)):
                    out.append({"c1": c1, "c2": c2,
                                "measure": measure.value, "score": score})
            return out

        pairs = body.pairs
        if workers <= 1 or len(pairs) <= _BATCH_CHUNK:
            records = run_chunk(pairs)
        else:
            chunks = [pairs[i:i + _BATCH_CHUNK]
                      for i in range(0, len(pairs), _BATCH_CHUNK)]
            with ThreadPoolExecutor(max_workers=workers) as pool:
                parts = list(pool.map(run_chunk, chunks))
            records = [r for part in parts for r in part]
        return {"records": records}

    @app.get("/neighbors")
    def neighbors_endpoint(m: str, c: str, k: int = Query(...)):
        measure = parse_measure(m)
        if k < 1:
            return _error(400, "k must be >= 1")
        o_c = index.ordinal(c)
        scored = []
        for o in range(index.concept_count):
            lca_ord, path = pair_stats(index, o_c, o)
            scored.append((-_score(index, measure, o_c, o, lca_ord, path),
                           index.ids[o]))
        scored.sort()
        top = scored[:min(k, len(scored))]
        return {"measure": measure.value, "concept": c,
                "neighbors": [{"id": cid, "score": -neg}
                              for neg, cid in top]}

    return app


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="ontosim-service",
        description="Read-only similarity service over a serialized index.")
    parser.add_argument("--index", default=os.environ.get("SSM_INDEX"),
                        help="index file (or SSM_INDEX)")
    parser.add_argument("--listen",
                        default=os.environ.get("SSM_LISTEN", DEFAULT_LISTEN),
                        help="host:port (or SSM_LISTEN)")
    parser.add_argument("--max-batch", type=int, default=DEFAULT_MAX_BATCH)
    parser.add_argument("--workers", type=int, default=1,
                        help="internal parallelism hint for /batch")
    args = parser.parse_args(argv)
    if not args.index:
        parser.error("--index or SSM_INDEX is required")
    if args.max_batch < 1:
        parser.error("--max-batch must be >= 1")

    index = load_index(args.index)  # listener opens only after this succeeds
    app = create_app(index, max_batch=args.max_batch, workers=args.workers)

    host, _, port = args.listen.rpartition(":")
    if not host or not port.isdigit():
        parser.error(f"--listen expects HOST:PORT, got {args.listen!r}")

    import uvicorn

    uvicorn.run(app, host=host, port=int(port), log_level="warning")
    return 0


if __name__ == "__main__":
    sys.exit(main())
