"""
JSON documents for values, points, regions, atlases, witnesses and generators.

Rationals travel as "p/q" strings (plain integers are accepted on input);
decimal notation is refused so that every value round-trips exactly.
Reflection words and morphism positions are 1-based in documents.
"""
import json
import re
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence, Tuple

from .chart_complex import BuildingPoint, ChartComplex, Gluing, region_from_pieces
from .errors import ParseError, UnsupportedRootSystemError
from .group_actions import IsometryGenerator
from .model_space import AffineMap, ConvexSet, Germ, HalfApartment, ModelSpace, Point
from .ordered_groups import GroupMorphism, GroupValue
from .root_systems import SUPPORTED_RANKS, SphericalWeylElement, build

_RATIONAL = re.compile(r"^\s*[+-]?\d+(\s*/\s*[+-]?\d+)?\s*$")


def parse_rational(raw: Any) -> Fraction:
    if isinstance(raw, bool) or isinstance(raw, float):
        raise ParseError(f"Inexact number {raw!r}: write rationals as 'p/q'", witness={"value": raw})
    if isinstance(raw, int):
        return Fraction(raw)
    if isinstance(raw, str) and _RATIONAL.match(raw):
        try:
            return Fraction(raw.replace(" ", ""))
        except ZeroDivisionError:
            raise ParseError(f"Zero denominator in {raw!r}", witness={"value": raw})
    raise ParseError(f"Not a rational 'p/q': {raw!r}", witness={"value": raw})


def parse_value(raw: Any, group_rank: int) -> GroupValue:
    if not isinstance(raw, list) or len(raw) != group_rank:
        raise ParseError(f"Expected {group_rank} rational entries, got {raw!r}", witness={"value": raw})
    return GroupValue(tuple(parse_rational(entry) for entry in raw))


def parse_point(raw: Any, space: ModelSpace) -> Point:
    if not isinstance(raw, list) or len(raw) != space.rank:
        raise ParseError(f"Expected {space.rank} coordinates, got {raw!r}", witness={"point": raw})
    return Point(tuple(parse_value(value, space.group_rank) for value in raw))


def parse_root(raw: Any, space: ModelSpace) -> Tuple[int, ...]:
    if not isinstance(raw, list) or len(raw) != space.rank or not all(isinstance(c, int) for c in raw):
        raise ParseError(f"Expected {space.rank} integer root coefficients, got {raw!r}", witness={"root": raw})
    return tuple(raw)


def _parse_constraints(raw: Any, space: ModelSpace) -> ConvexSet:
    if not isinstance(raw, list):
        raise ParseError("A convex region is a list of half-apartments", witness={"region": raw})
    constraints = []
    for item in raw:
        if not isinstance(item, dict) or "root" not in item:
            raise ParseError("Half-apartments need 'root' and 'offset'", witness={"constraint": item})
        offset = item.get("offset", "-inf")
        value = None if offset == "-inf" else parse_value(offset, space.group_rank)
        constraints.append(HalfApartment(parse_root(item["root"], space), value))
    return ConvexSet(tuple(constraints))


def parse_region(raw: Any, space: ModelSpace) -> ConvexSet:
    """A list of half-apartments, or {"union": [list, ...]} of convex pieces."""
    if isinstance(raw, dict) and "union" in raw:
        pieces = raw["union"]
        if not isinstance(pieces, list) or not pieces:
            raise ParseError("A union region needs at least one piece", witness={"region": raw})
        return region_from_pieces(space, [_parse_constraints(piece, space) for piece in pieces])
    return _parse_constraints(raw, space)


def region_to_json(region: ConvexSet) -> list:
    return [c.to_json() for c in region.constraints]


def parse_weyl(raw: Any, space: ModelSpace) -> AffineMap:
    if not isinstance(raw, dict):
        raise ParseError("A Weyl map is an object with 'word' and 'translation'", witness={"weyl": raw})
    rs = space.root_system
    word = raw.get("word", [])
    if not isinstance(word, list) or not all(isinstance(i, int) and 1 <= i <= rs.rank for i in word):
        raise ParseError(f"Reflection words use indices 1..{rs.rank}", witness={"word": word})
    linear = rs.from_word(i - 1 for i in word)
    if "matrix" in raw:
        matrix = raw["matrix"]
        if not isinstance(matrix, list) or len(matrix) != rs.rank or any(
            not isinstance(row, list) or len(row) != rs.rank or not all(isinstance(x, int) for x in row)
            for row in matrix
        ):
            raise ParseError(f"Expected a {rs.rank}x{rs.rank} integer matrix", witness={"matrix": matrix})
        explicit = SphericalWeylElement(tuple(tuple(row) for row in matrix))
        if word and explicit != linear:
            raise ParseError("Weyl word and matrix disagree", witness={"word": word, "matrix": matrix})
        linear = rs.element(explicit.matrix) or explicit
    translation = raw.get("translation")
    t = space.origin if translation is None else parse_point(translation, space)
    return AffineMap(linear, t)


def weyl_to_json(w: AffineMap, space: ModelSpace) -> dict:
    known = space.root_system.element(w.linear.matrix)
    document = {"translation": w.translation.to_json()}
    if known is None:
        document["matrix"] = [list(row) for row in w.linear.matrix]
    else:
        document["word"] = [i + 1 for i in known.word]
    return document


def parse_space(document: dict) -> ModelSpace:
    try:
        system = document["root_system"]
        kind, rank = str(system["type"]), system["rank"]
        group_rank = document["group_rank"]
    except (KeyError, TypeError):
        raise ParseError("Atlas needs 'root_system' {type, rank} and 'group_rank'", witness=None)
    if not isinstance(rank, int) or not isinstance(group_rank, int) or group_rank < 0:
        raise ParseError("Ranks must be integers", witness={"rank": rank, "group_rank": group_rank})
    key = "G" if kind.upper() == "G2" else kind.upper()
    if key not in SUPPORTED_RANKS or rank not in SUPPORTED_RANKS[key]:
        raise UnsupportedRootSystemError(f"Unsupported root system {kind}{rank}", witness={"type": kind, "rank": rank})
    return ModelSpace(build(key, rank), group_rank)


def atlas_from_document(document: Any) -> ChartComplex:
    if not isinstance(document, dict):
        raise ParseError("An atlas document is a JSON object", witness=None)
    space = parse_space(document)
    charts = document.get("charts")
    if not isinstance(charts, list) or not charts or not all(isinstance(c, str) for c in charts):
        raise ParseError("Atlas needs a nonempty list of chart ids", witness={"charts": charts})
    entries = document.get("gluings", [])
    if not isinstance(entries, list):
        raise ParseError("'gluings' is a list", witness={"gluings": entries})
    gluings = []
    for entry in entries:
        pair = entry.get("pair") if isinstance(entry, dict) else None
        if not isinstance(pair, list) or len(pair) != 2:
            raise ParseError("Each gluing needs a 'pair' of chart ids", witness={"gluing": entry})
        region = parse_region(entry.get("region", []), space)
        transition = parse_weyl(entry.get("weyl", {}), space)
        gluings.append(Gluing(str(pair[0]), str(pair[1]), region, transition))
    return ChartComplex(space, charts, gluings)


def atlas_to_document(cc: ChartComplex) -> dict:
    rs = cc.root_system
    return {
        "root_system": {"type": rs.kind, "rank": rs.rank},
        "group_rank": cc.group_rank,
        "charts": list(cc.charts),
        "gluings": [
            {
                "pair": [g.source, g.target],
                "region": region_to_json(g.region),
                "weyl": weyl_to_json(g.transition, cc.space),
            }
            for g in cc.gluings
        ],
    }


def parse_building_point(raw: Any, cc: ChartComplex) -> BuildingPoint:
    """``CHART:[[...]]`` literals or {"chart": ..., "coords": ...} objects."""
    if isinstance(raw, str):
        chart, sep, coords = raw.partition(":")
        if not sep:
            raise ParseError(f"Point literal {raw!r} lacks 'CHART:'", witness={"point": raw})
        try:
            raw = {"chart": chart.strip(), "coords": json.loads(coords)}
        except json.JSONDecodeError as error:
            raise ParseError(f"Point literal {raw!r}: {error.msg}", witness={"point": raw})
    if not isinstance(raw, dict) or "chart" not in raw or "coords" not in raw:
        raise ParseError("A point needs 'chart' and 'coords'", witness={"point": raw})
    p = BuildingPoint(str(raw["chart"]), parse_point(raw["coords"], cc.space))
    return cc.check_point(p)


def parse_germ(raw: Any, cc: ChartComplex) -> Tuple[str, Germ]:
    """{"chart", "base", "word", "face"?}; face lists 1-based simple roots, all by default."""
    if not isinstance(raw, dict) or "chart" not in raw or "base" not in raw:
        raise ParseError("A germ needs 'chart' and 'base'", witness={"germ": raw})
    rs = cc.root_system
    chart = cc.require_chart(str(raw["chart"]))
    base = parse_point(raw["base"], cc.space)
    word = raw.get("word", [])
    if not isinstance(word, list) or not all(isinstance(i, int) and 1 <= i <= rs.rank for i in word):
        raise ParseError(f"Reflection words use indices 1..{rs.rank}", witness={"word": word})
    face = raw.get("face", list(range(1, rs.rank + 1)))
    if not isinstance(face, list) or not all(isinstance(i, int) and 1 <= i <= rs.rank for i in face):
        raise ParseError(f"Faces list simple roots 1..{rs.rank}", witness={"face": face})
    return chart, cc.space.germ(base, rs.from_word(i - 1 for i in word), (i - 1 for i in face))


def parse_witnesses(document: Any, cc: ChartComplex) -> Tuple[List[BuildingPoint], List[Tuple[str, Germ]]]:
    if isinstance(document, list):
        document = {"points": document}
    if not isinstance(document, dict):
        raise ParseError("Witnesses are {'points': [...], 'germs': [...]}", witness=None)
    raw_points, raw_germs = document.get("points", []), document.get("germs", [])
    if not isinstance(raw_points, list) or not isinstance(raw_germs, list):
        raise ParseError("Witness points and germs are lists", witness={"points": raw_points, "germs": raw_germs})
    points = [parse_building_point(p, cc) for p in raw_points]
    germs = [parse_germ(g, cc) for g in raw_germs]
    return points, germs


def parse_generators(document: Any, cc: ChartComplex) -> List[IsometryGenerator]:
    """{"generators": [...]} or a bare list; a bare Weyl map acts on a single chart."""
    if isinstance(document, dict):
        document = document.get("generators")
    if not isinstance(document, list):
        raise ParseError("Generators are a list", witness=None)
    generators = []
    for entry in document:
        if isinstance(entry, dict) and "maps" in entry:
            chart_map = entry.get("chart_map") or {f: f for f in cc.charts}
            if not isinstance(chart_map, dict):
                raise ParseError("'chart_map' is an object", witness={"generator": entry})
            if not isinstance(entry["maps"], dict):
                raise ParseError("'maps' sends chart ids to Weyl maps", witness={"generator": entry})
            maps = {str(f): parse_weyl(w, cc.space) for f, w in entry["maps"].items()}
            generators.append(IsometryGenerator.of({str(k): str(v) for k, v in chart_map.items()}, maps))
        else:
            if len(cc.charts) != 1:
                raise ParseError(
                    "Bare Weyl maps only act on single-chart complexes", witness={"charts": list(cc.charts)}
                )
            generators.append(IsometryGenerator.affine(cc.charts[0], parse_weyl(entry, cc.space)))
    return generators


def _is_integer(value: Any) -> bool:
    return isinstance(value, int) and not isinstance(value, bool)


def parse_morphism(spec: Dict[str, Any], source_rank: int) -> GroupMorphism:
    """{"epi_keep": s} and/or {"mono_positions": [...], "mono_scales": [...], "target_rank": m}."""
    if not isinstance(spec, dict):
        raise ParseError("A morphism is a JSON object", witness={"morphism": spec})
    keep = spec.get("epi_keep", source_rank)
    if not _is_integer(keep):
        raise ParseError("'epi_keep' is an integer", witness=spec)
    positions = spec.get("mono_positions") or list(range(1, keep + 1))
    if not isinstance(positions, list) or not all(_is_integer(p) for p in positions):
        raise ParseError("'mono_positions' is a list of integers", witness=spec)
    scales = spec.get("mono_scales") or [1] * len(positions)
    if not isinstance(scales, list):
        raise ParseError("'mono_scales' is a list of rationals", witness=spec)
    if len(positions) != keep or len(scales) != keep:
        raise ParseError(f"The embedding needs {keep} positions and scales", witness=spec)
    target_rank = spec.get("target_rank") or max(positions, default=0)
    if not _is_integer(target_rank):
        raise ParseError("'target_rank' is an integer", witness=spec)
    return GroupMorphism(source_rank, keep, tuple(positions), tuple(parse_rational(s) for s in scales), target_rank)


def load_json(path: str) -> Any:
    try:
        with open(path, "r", encoding="utf-8") as f:
            return json.load(f)
    except OSError as error:
        raise ParseError(f"Cannot read {path}: {error.strerror}", witness={"path": path})
    except json.JSONDecodeError as error:
        raise ParseError(f"{path} is not valid JSON: {error.msg}", witness={"path": path, "line": error.lineno})


def dumps(payload: Any) -> str:
    return json.dumps(payload, indent=2, sort_keys=True, ensure_ascii=False)


