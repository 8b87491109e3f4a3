"""
Operations shared by the command line and the HTTP API.

Each function takes JSON-shaped input (an atlas document plus raw points,
witnesses or generators) and returns a JSON-ready dict.
"""
import logging
from typing import Any, Optional, Sequence, Tuple

from .base_change import EpiFunctor, compose_functors, fiber, residue_fiber_iso
from .chart_complex import check_axioms, validate
from .errors import ParseError
from .group_actions import IsometryAction, fixed_point
from .ordered_groups import quotient_epi
from .serialization import (
    atlas_from_document,
    atlas_to_document,
    parse_building_point,
    parse_generators,
    parse_germ,
    parse_morphism,
    parse_witnesses,
    region_to_json,
)

logger = logging.getLogger(__name__)


def load_complex(document: Any):
    return validate(atlas_from_document(document))


def distance(document: Any, p: Any, q: Any) -> dict:
    cc = load_complex(document)
    d = cc.distance(parse_building_point(p, cc), parse_building_point(q, cc))
    return {"distance": [d.to_json()]}


def hull(document: Any, points: Sequence[Any]) -> dict:
    """Weyl-convex hull of points, expressed in the chart of the first one."""
    cc = load_complex(document)
    parsed = [parse_building_point(p, cc) for p in points]
    if not parsed:
        raise ParseError("hull needs at least one point", witness=None)
    chart = parsed[0].chart
    coords = [cc.transport(p, chart) for p in parsed]
    return {"chart": chart, "hull": region_to_json(cc.space.convex_hull(coords))}


def validate_atlas(document: Any) -> dict:
    cc = load_complex(document)
    return {"valid": True, **cc.to_summary()}


def check(document: Any, witnesses: Any = None) -> Tuple[dict, bool]:
    """Axiom report and overall verdict; structural errors become an A2 failure."""
    cc = atlas_from_document(document)
    points, germs = parse_witnesses(witnesses, cc) if witnesses is not None else ([], [])
    report = check_axioms(cc, points, germs)
    return report.to_dict(), report.passed


def retract(document: Any, chart: str, germ: Any, p: Any) -> dict:
    cc = load_complex(document)
    germ_chart, parsed_germ = parse_germ(germ, cc)
    if germ_chart != chart:
        raise ParseError("The germ must be given in the target chart", witness={"chart": chart, "germ": germ_chart})
    image = cc.retract(chart, parsed_germ, parse_building_point(p, cc))
    return {"point": image.to_json()}


def residue(document: Any, p: Any) -> dict:
    cc = load_complex(document)
    return cc.residue(parse_building_point(p, cc)).to_dict()


def boundary(document: Any) -> dict:
    return load_complex(document).boundary().to_dict()


def basechange(document: Any, morphism: dict) -> dict:
    cc = load_complex(document)
    m = parse_morphism(morphism, cc.group_rank)
    image = compose_functors(m, cc).complex
    return {
        "atlas": atlas_to_document(image),
        "morphism": m.kind,
        "source_boundary_classes": cc.boundary().count,
        "boundary_classes": image.boundary().count,
    }


def fiber_at(document: Any, keep: int, p: Any) -> dict:
    cc = load_complex(document)
    functor = EpiFunctor(cc.space, quotient_epi(keep, cc.group_rank))
    x = parse_building_point(p, cc)
    result = fiber(functor, cc, x)
    matching = residue_fiber_iso(functor, cc, x)
    return {
        "atlas": atlas_to_document(result.complex),
        "base": result.base.to_json(),
        "anchors": {chart: anchor.to_json() for chart, anchor in sorted(result.anchors.items())},
        "merged": dict(sorted(result.merged.items())),
        "boundary_classes": matching.fiber_boundary.count,
        "residue": matching.to_dict(),
    }


def fixed(document: Any, generators: Any, x0: Optional[Any] = None) -> dict:
    cc = load_complex(document)
    action = IsometryAction(cc, parse_generators(generators, cc))
    start = None if x0 is None else parse_building_point(x0, cc)
    return fixed_point(action, start).to_dict()
