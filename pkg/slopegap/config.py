"""Surface configs: TOML files with exact constants, bundled or loaded from a path."""

import logging
import os
import sys
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Tuple

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from slopegap.expr import ExpressionError, UnknownConstantError, evaluate, evaluate_rational
from slopegap.geometry import Matrix2, Vec2
from slopegap.realfield import FieldElement, FieldError, RealField
from slopegap.section import SectionError, Transversal, build_transversal
from slopegap.surface import (
    CuspData,
    Gluing,
    GluingKind,
    Rectangle,
    StaircaseSurface,
    SurfaceError,
    is_holonomy,
)
from slopegap.winners import SearchConfig, WinnerError

log = logging.getLogger(__name__)

BUNDLED = ("heptagon", "pentagon")
DEFAULT_CONFIG = "heptagon"
ENV_CONFIG = "SLOPEGAP_CONFIG"


class ConfigError(Exception):
    pass


class ConfigParseError(ConfigError):
    pass


class UnresolvedConstantError(ConfigError):
    pass


class ConfigInvariantError(ConfigError):
    pass


@dataclass(frozen=True)
class Numerics:
    dps: int = 50
    volume_tolerance: float = 1e-10
    t_min: float = 0.4
    t_max: float = 10.0
    samples: int = 200
    radius: int = 40
    histogram_bins: int = 60

    def __post_init__(self):
        if self.dps < 15:
            raise ConfigInvariantError("numerics.dps must be at least 15")
        if not 0 < self.t_min < self.t_max:
            raise ConfigInvariantError("numerics needs 0 < t_min < t_max")
        if self.samples < 2:
            raise ConfigInvariantError("numerics.samples must be at least 2")
        if self.radius <= 0:
            raise ConfigInvariantError("numerics.radius must be positive")


@dataclass(frozen=True)
class Expected:
    """Reference values checked by `slopegap verify`; all optional."""

    omega_area: Optional[FieldElement] = None
    winners: Tuple[Vec2, ...] = ()
    endpoints: Tuple[float, ...] = ()
    endpoint_tolerance: float = 1e-6
    breakpoints: Tuple[float, ...] = ()
    breakpoint_tolerance: float = 1e-5
    volume: Optional[float] = None
    volume_tolerance: float = 1e-8
    closed_form: bool = False
    ks_max: Optional[float] = None
    min_gap_ratio: Optional[float] = None


@dataclass(frozen=True)
class SurfaceConfig:
    name: str
    description: str
    origin: str
    field: RealField
    cusp: CuspData
    surface: StaircaseSurface
    transversal: Transversal
    search: SearchConfig
    numerics: Numerics
    expected: Expected


def resolve_source(name_or_path: Optional[str] = None) -> Tuple[str, str]:
    """(TOML text, origin) for a bundled name or a file path; falls back to $SLOPEGAP_CONFIG."""
    target = name_or_path or os.environ.get(ENV_CONFIG) or DEFAULT_CONFIG
    if target in BUNDLED:
        text = (resources.files("slopegap") / "surfaces" / f"{target}.toml").read_text(encoding="utf-8")
        return text, f"bundled:{target}"
    path = Path(target)
    if not path.is_file():
        raise ConfigParseError(
            f"no config file {target!r} (bundled configs: {', '.join(BUNDLED)})"
        )
    return path.read_text(encoding="utf-8"), str(path)


def load_config(name_or_path: Optional[str] = None) -> SurfaceConfig:
    text, origin = resolve_source(name_or_path)
    try:
        data = tomllib.loads(text)
    except tomllib.TOMLDecodeError as e:
        raise ConfigParseError(f"{origin}: {e}") from None
    config = _Builder(data, origin).build()
    log.info("loaded %s from %s", config.name, origin)
    return config


class _Builder:
    def __init__(self, data: Mapping[str, Any], origin: str):
        self.data = data
        self.origin = origin
        self.field: Optional[RealField] = None

    def fail(self, where: str, message: str) -> ConfigParseError:
        return ConfigParseError(f"{self.origin}: [{where}] {message}")

    def section(self, name: str, required: bool = True) -> Mapping[str, Any]:
        value = self.data.get(name)
        if value is None:
            if required:
                raise self.fail(name, "missing section")
            return {}
        if not isinstance(value, dict):
            raise self.fail(name, "must be a table")
        return value

    def key(self, table: Mapping[str, Any], key: str, where: str):
        if key not in table:
            raise self.fail(where, f"missing key {key!r}")
        return table[key]

    def value(self, raw, where: str) -> FieldElement:
        """Exact element from an expression string, an integer, or a coefficient list."""
        try:
            if isinstance(raw, bool):
                raise self.fail(where, "expected a number or an expression")
            if isinstance(raw, list):
                return self.field.element([evaluate_rational(c) for c in raw])
            if isinstance(raw, float):
                raise self.fail(where, f"floats are not exact; write {raw!r} as a \"num/den\" string")
            return evaluate(self.field, str(raw))
        except UnknownConstantError as e:
            raise UnresolvedConstantError(f"{self.origin}: [{where}] {e}") from None
        except (ExpressionError, FieldError) as e:
            raise self.fail(where, str(e)) from None

    def rational(self, raw, where: str) -> Fraction:
        try:
            return evaluate_rational(raw)
        except ExpressionError as e:
            raise self.fail(where, str(e)) from None

    def pair(self, raw, where: str) -> Tuple[FieldElement, FieldElement]:
        if not isinstance(raw, list) or len(raw) != 2:
            raise self.fail(where, "expected a pair")
        return self.value(raw[0], where), self.value(raw[1], where)

    def matrix(self, raw, where: str) -> Matrix2:
        if not isinstance(raw, list) or len(raw) != 2:
            raise self.fail(where, "expected a 2x2 matrix as two rows")
        (a, b), (c, d) = self.pair(raw[0], where), self.pair(raw[1], where)
        return Matrix2(a, b, c, d)

    # sections

    def build(self) -> SurfaceConfig:
        meta = self.section("surface")
        self.field = self.build_field()
        cusp = self.build_cusp()
        surface = self.build_surface()
        search = self.build_search()
        numerics = self.build_numerics()
        expected = self.build_expected()
        try:
            transversal = build_transversal(cusp)
        except (SectionError, SurfaceError) as e:
            raise ConfigInvariantError(f"{self.origin}: [cusp] {e}") from None
        if expected.omega_area is not None and transversal.area() != expected.omega_area:
            raise ConfigInvariantError(
                f"{self.origin}: [expected] area of Ω is {float(transversal.area()):.12g}, "
                f"expected {float(expected.omega_area):.12g}"
            )
        self.check_cusp_vectors(surface, cusp)
        return SurfaceConfig(
            name=str(meta.get("name", self.origin)),
            description=str(meta.get("description", "")),
            origin=self.origin,
            field=self.field,
            cusp=cusp,
            surface=surface,
            transversal=transversal,
            search=search,
            numerics=numerics,
            expected=expected,
        )

    def build_field(self) -> RealField:
        table = self.section("field")
        poly = self.key(table, "min_poly", "field")
        interval = self.key(table, "root_interval", "field")
        if not isinstance(poly, list) or not all(isinstance(c, int) for c in poly):
            raise self.fail("field", "min_poly must be a list of integers, constant term first")
        if not isinstance(interval, list) or len(interval) != 2:
            raise self.fail("field", "root_interval must be a pair")
        lo, hi = (self.rational(x, "field") for x in interval)
        try:
            built = RealField(poly, (lo, hi), trig_base=table.get("trig_base"), name=self.origin)
        except FieldError as e:
            raise ConfigInvariantError(f"{self.origin}: [field] {e}") from None
        self.field = built
        for name, raw in table.get("constants", {}).items():
            built.constants[name] = self.value(raw, f"field.constants.{name}")
        log.debug("field %r with constants %s", built, ", ".join(built.constants))
        return built

    def build_cusp(self) -> CuspData:
        table = self.section("cusp")
        n = self.key(table, "n", "cusp")
        if not isinstance(n, int) or isinstance(n, bool):
            raise self.fail("cusp", "n must be an integer")
        cusp = CuspData(
            x0=self.value(self.key(table, "x0", "cusp"), "cusp.x0"),
            y0=self.value(self.key(table, "y0", "cusp"), "cusp.y0"),
            alpha=self.value(self.key(table, "alpha", "cusp"), "cusp.alpha"),
            n=n,
            C=self.matrix(table.get("C", [["1", "0"], ["0", "1"]]), "cusp.C"),
        )
        try:
            cusp.validate()
        except SurfaceError as e:
            raise ConfigInvariantError(f"{self.origin}: [cusp] {e}") from None
        return cusp

    def build_surface(self) -> StaircaseSurface:
        shear = self.matrix(self.key(self.section("shear"), "matrix", "shear"), "shear.matrix")
        table = self.section("staircase")
        generators = [
            (str(raw), self.value(raw, "staircase.generators"))
            for raw in self.key(table, "generators", "staircase")
        ]
        rectangles = []
        for i, r in enumerate(self.key(table, "rectangles", "staircase")):
            where = f"staircase.rectangles[{i}]"
            corner = self.pair(self.key(r, "corner", where), where)
            rectangles.append(
                Rectangle(
                    Vec2(*corner),
                    self.value(self.key(r, "width", where), where),
                    self.value(self.key(r, "height", where), where),
                )
            )
        gluings = [self.gluing(g, i, len(rectangles)) for i, g in enumerate(self.key(table, "gluings", "staircase"))]
        polygon_area = table.get("polygon_area")
        expected_area = self.value(polygon_area, "staircase.polygon_area") if polygon_area is not None else None
        try:
            return StaircaseSurface(self.field, rectangles, gluings, generators, shear, expected_area)
        except SurfaceError as e:
            raise ConfigInvariantError(f"{self.origin}: [staircase] {e}") from None

    def gluing(self, raw: Mapping[str, Any], i: int, count: int) -> Gluing:
        where = f"staircase.gluings[{i}]"
        try:
            kind = GluingKind(self.key(raw, "kind", where))
        except ValueError:
            raise self.fail(where, "kind must be \"horizontal\" or \"vertical\"") from None
        source, target = self.key(raw, "from", where), self.key(raw, "to", where)
        for index in (source, target):
            if not isinstance(index, int) or not 0 <= index < count:
                raise self.fail(where, f"rectangle index {index!r} out of range")
        return Gluing(
            kind,
            source,
            target,
            self.pair(self.key(raw, "from_span", where), where),
            self.pair(self.key(raw, "to_span", where), where),
        )

    def build_search(self) -> SearchConfig:
        table = self.section("search", required=False)
        kwargs: Dict[str, Any] = {}
        for name in ("initial_box_margin", "seed_box", "max_seed_box"):
            if name in table:
                kwargs[name] = self.rational(table[name], f"search.{name}")
        for name in ("max_candidates", "max_iterations", "fallback_width_check"):
            if name in table:
                kwargs[name] = table[name]
        try:
            return SearchConfig(**kwargs)
        except WinnerError as e:
            raise ConfigInvariantError(f"{self.origin}: [search] {e}") from None

    def build_numerics(self) -> Numerics:
        table = self.section("numerics", required=False)
        known = set(Numerics.__dataclass_fields__)
        unknown = set(table) - known
        if unknown:
            raise self.fail("numerics", f"unknown keys {', '.join(sorted(unknown))}")
        return Numerics(**table)

    def build_expected(self) -> Expected:
        table = self.section("expected", required=False)
        kwargs: Dict[str, Any] = {}
        if "omega_area" in table:
            kwargs["omega_area"] = self.value(table["omega_area"], "expected.omega_area")
        if "winners" in table:
            kwargs["winners"] = tuple(Vec2(*self.pair(w, "expected.winners")) for w in table["winners"])
        for name in ("endpoints", "breakpoints"):
            if name in table:
                kwargs[name] = tuple(float(x) for x in table[name])
        for name in ("endpoint_tolerance", "breakpoint_tolerance", "volume", "volume_tolerance", "ks_max", "min_gap_ratio"):
            if name in table:
                kwargs[name] = float(table[name])
        if "closed_form" in table:
            kwargs["closed_form"] = bool(table["closed_form"])
        return Expected(**kwargs)

    def check_cusp_vectors(self, surface: StaircaseSurface, cusp: CuspData):
        zero, one = self.field.zero, self.field.one
        for label, v in (("(1, 0)", Vec2(one, zero)), ("(x0, y0)", cusp.vector)):
            if not is_holonomy(surface, surface.shear.apply(v)):
                raise ConfigInvariantError(
                    f"{self.origin}: [cusp] {label} is not a holonomy vector of the staircase"
                )


def describe(config: SurfaceConfig) -> List[Tuple[str, str]]:
    """Key facts for display."""
    c = config.cusp
    return [
        ("surface", config.name),
        ("source", config.origin),
        ("field", f"degree {config.field.degree}, θ ≈ {float(config.field.gen):.12g}"),
        ("cusp", f"({float(c.x0):.9g}, {float(c.y0):.9g}), alpha ≈ {float(c.alpha):.9g}, n = {c.n}"),
        ("staircase", f"{len(config.surface.rectangles)} rectangles, {len(config.surface.gluings)} gluings"),
        ("area of Ω", f"{float(config.transversal.area()):.12g}"),
    ]
