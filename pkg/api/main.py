"""
FastAPI API exposing exact computations on stored or inline Λ-building atlases.
"""
from fastapi import FastAPI, HTTPException, Form
from typing import Callable, Optional
import json
import logging
import os
import sys

# Add project directory to path for imports
project_root = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
sys.path.insert(0, project_root)

from buildings import commands
from buildings.atlas_manager import atlas_manager
from buildings.config import port
from buildings.errors import BuildingError, ValidationError

logger = logging.getLogger(__name__)

app = FastAPI(
    title="Lambda Buildings API",
    description="Exact computations in affine Λ-buildings presented by finite atlases",
    version="1.0.0"
)


def _parse_json(raw: str, field: str):
    try:
        return json.loads(raw)
    except json.JSONDecodeError as e:
        raise HTTPException(
            status_code=400,
            detail=f"Field '{field}' is not valid JSON: {e.msg}"
        )


def _document(atlas_name: Optional[str], atlas: Optional[str]) -> dict:
    """Resolve a stored atlas by name, or parse an inline atlas document."""
    if atlas_name:
        document = atlas_manager.load_document(atlas_name)
        if document is None:
            raise HTTPException(
                status_code=404,
                detail=f"Atlas '{atlas_name}' not found"
            )
        return document
    if atlas:
        return _parse_json(atlas, "atlas")
    raise HTTPException(
        status_code=400,
        detail="Provide either 'atlas_name' or an inline 'atlas' document"
    )


def _run(action: str, operation: Callable[[], dict]) -> dict:
    """Run an operation, mapping domain errors onto HTTP status codes."""
    try:
        return {"success": True, **operation()}
    except HTTPException:
        raise
    except ValidationError as e:
        raise HTTPException(status_code=422, detail=e.to_dict())
    except BuildingError as e:
        raise HTTPException(status_code=400, detail=e.to_dict())
    except Exception as e:
        logger.exception("Unexpected failure while %s", action)
        raise HTTPException(
            status_code=500,
            detail=f"Error {action}: {str(e)}"
        )


@app.get("/")
async def root():
    """Root endpoint with API information."""
    return {
        "message": "Lambda Buildings API",
        "version": "1.0.0",
        "endpoints": {
            "GET /atlases": "List stored atlases",
            "GET /atlases/{name}": "Get a stored atlas document",
            "POST /atlases": "Validate and store a new atlas",
            "DELETE /atlases/{name}": "Delete a stored atlas",
            "POST /validate": "Check convexity, transitions and cocycles",
            "POST /distance": "Λ-valued distance between two points",
            "POST /hull": "Weyl-convex hull of points in one chart",
            "POST /check-axioms": "Axiom report (A1-A6) on witness points and germs",
            "POST /retract": "Retraction onto a chart centered at a germ",
            "POST /residue": "Chamber classes of the residue at a point",
            "POST /boundary": "Chamber classes of the building at infinity",
            "POST /basechange": "Image atlas under a base change of Λ",
            "POST /fiber": "Fiber building through a point",
            "POST /fixed-point": "Fixed point of a finite isometry group"
        }
    }


@app.get("/atlases")
async def list_atlases():
    """
    List all stored atlases.

    Returns:
        dict: Atlas names with their root system, group rank and charts
    """
    try:
        atlases = atlas_manager.list_atlases()

        return {
            "success": True,
            "count": len(atlases),
            "atlases": atlases
        }

    except Exception as e:
        raise HTTPException(
            status_code=500,
            detail=f"Error retrieving atlases: {str(e)}"
        )


@app.get("/atlases/{name}")
async def get_atlas(name: str):
    """
    Retrieve a stored atlas document by its name.
    """
    document = _run("retrieving atlas", lambda: {"atlas": atlas_manager.load_document(name)})
    if document["atlas"] is None:
        raise HTTPException(
            status_code=404,
            detail=f"Atlas '{name}' not found"
        )
    return document


@app.post("/atlases")
async def add_atlas(
    name: str = Form(...),
    atlas: str = Form(...)
):
    """
    Validate and store a new atlas.

    Args:
        name: Atlas name (file name in the data directory)
        atlas: Atlas document as JSON

    Returns:
        dict: Summary of the stored atlas
    """
    document = _parse_json(atlas, "atlas")
    if atlas_manager.load_document(name) is not None:
        raise HTTPException(
            status_code=400,
            detail=f"An atlas with name '{name}' already exists"
        )
    return _run("storing atlas", lambda: {"atlas": atlas_manager.save_atlas(name, document)})


@app.delete("/atlases/{name}")
async def delete_atlas(name: str):
    """
    Delete a stored atlas by its name.
    """
    deleted = _run("deleting atlas", lambda: {"deleted": atlas_manager.delete_atlas(name)})
    if not deleted["deleted"]:
        raise HTTPException(
            status_code=404,
            detail=f"Atlas '{name}' not found"
        )
    return {
        "success": True,
        "message": f"Atlas '{name}' deleted successfully"
    }


@app.post("/validate")
async def validate_atlas(
    atlas_name: Optional[str] = Form(None),
    atlas: Optional[str] = Form(None)
):
    """Exact validation of an atlas."""
    document = _document(atlas_name, atlas)
    return _run("validating atlas", lambda: commands.validate_atlas(document))


@app.post("/distance")
async def distance(
    p: str = Form(...),
    q: str = Form(...),
    atlas_name: Optional[str] = Form(None),
    atlas: Optional[str] = Form(None)
):
    """
    Λ-valued distance between two points.

    Args:
        p, q: Point literals CHART:[[...]]
    """
    document = _document(atlas_name, atlas)
    return _run("computing distance", lambda: commands.distance(document, p, q))


@app.post("/hull")
async def hull(
    points: str = Form(...),
    atlas_name: Optional[str] = Form(None),
    atlas: Optional[str] = Form(None)
):
    """Weyl-convex hull; ``points`` is a JSON list of point literals."""
    document = _document(atlas_name, atlas)
    parsed = _parse_json(points, "points")
    return _run("computing hull", lambda: commands.hull(document, parsed))


@app.post("/check-axioms")
async def check_axioms(
    witnesses: Optional[str] = Form(None),
    atlas_name: Optional[str] = Form(None),
    atlas: Optional[str] = Form(None)
):
    """
    Axiom report on witness points and germs.

    Returns:
        dict: Per-axiom verdicts and whether all of them passed
    """
    document = _document(atlas_name, atlas)
    parsed = _parse_json(witnesses, "witnesses") if witnesses else None

    def operation():
        report, passed = commands.check(document, parsed)
        return {"passed": passed, "report": report}

    return _run("checking axioms", operation)


@app.post("/retract")
async def retract(
    chart: str = Form(...),
    germ: str = Form(...),
    p: str = Form(...),
    atlas_name: Optional[str] = Form(None),
    atlas: Optional[str] = Form(None)
):
    """Retraction onto ``chart`` centered at ``germ`` (JSON)."""
    document = _document(atlas_name, atlas)
    parsed = _parse_json(germ, "germ")
    return _run("retracting point", lambda: commands.retract(document, chart, parsed, p))


@app.post("/residue")
async def residue(
    p: str = Form(...),
    atlas_name: Optional[str] = Form(None),
    atlas: Optional[str] = Form(None)
):
    document = _document(atlas_name, atlas)
    return _run("computing residue", lambda: commands.residue(document, p))


@app.post("/boundary")
async def boundary(
    atlas_name: Optional[str] = Form(None),
    atlas: Optional[str] = Form(None)
):
    document = _document(atlas_name, atlas)
    return _run("computing boundary", lambda: commands.boundary(document))


@app.post("/basechange")
async def basechange(
    morphism: str = Form(...),
    atlas_name: Optional[str] = Form(None),
    atlas: Optional[str] = Form(None)
):
    """
    Image atlas under a base change.

    Args:
        morphism: JSON {"epi_keep": s, "mono_positions": [...], "mono_scales": [...]}
    """
    document = _document(atlas_name, atlas)
    spec = _parse_json(morphism, "morphism")
    if not isinstance(spec, dict):
        raise HTTPException(status_code=400, detail="Field 'morphism' must be a JSON object")
    return _run("computing base change", lambda: commands.basechange(document, spec))


@app.post("/fiber")
async def fiber(
    epi_keep: int = Form(...),
    p: str = Form(...),
    atlas_name: Optional[str] = Form(None),
    atlas: Optional[str] = Form(None)
):
    document = _document(atlas_name, atlas)
    return _run("computing fiber", lambda: commands.fiber_at(document, epi_keep, p))


@app.post("/fixed-point")
async def fixed_point(
    generators: str = Form(...),
    x0: Optional[str] = Form(None),
    atlas_name: Optional[str] = Form(None),
    atlas: Optional[str] = Form(None)
):
    """Fixed point of the group generated by ``generators`` (JSON)."""
    document = _document(atlas_name, atlas)
    parsed = _parse_json(generators, "generators")
    return _run("computing fixed point", lambda: commands.fixed(document, parsed, x0))


if __name__ == "__main__":
    import uvicorn
    uvicorn.run(app, host="0.0.0.0", port=port())
