"""
Exact-model export (LP text) and solution import.

`export_miqcp` writes the mixed-integer model with its quadratic time
couplings intact; `export_bigm` writes the linearized variant in which
each quadratic row is replaced by big-M implications.  Both emit
CPLEX/Gurobi LP format.  Row names carry the constraint numbers used
throughout this package, which are defined in docs/MODEL.md.

`import_solution` reads a solver solution file ("name value" lines,
"#"-comments ignored), rebuilds the plan from the binary variables and
cross-checks the reported times against recomputed ones.
"""

from __future__ import annotations

import logging

from .evaluation import DistanceTable, propagate, validate
from .exact import horizon
from .model import Instance, ModelError, RoutePlan, Schedule, Sortie

logger = logging.getLogger(__name__)

ARRIVAL_SPEEDS = ("vehicle", "robot")

TIME_MISMATCH_TOLERANCE = 1e-4
BINARY_TOLERANCE = 1e-4


class SolutionImportError(ValueError):
    """A solution file could not be turned into a feasible plan."""


# ---------------------------------------------------------------------------
# variable naming


def name_y(k: int, l: int) -> str:
    """Vehicle arc variable: travel from node k to node l (0 = depot)."""
    return f"y_{k}_{l}"


def name_x(r: int, k: int, o: int) -> str:
    """First-service variable: robot r starts its sortie at station k
    with customer o."""
    return f"x_{r}_{k}_{o}"


def name_z(r: int, o: int, k: int) -> str:
    """Last-service variable: robot r ends its sortie at station k
    with customer o."""
    return f"z_{r}_{o}_{k}"


def name_w(r: int, k: int, o: int, p: int) -> str:
    """Succession variable: robot r at station k serves p directly
    after o."""
    return f"w_{r}_{k}_{o}_{p}"


def parse_variable(name: str) -> tuple[str, tuple[int, ...]]:
    """Inverse of the name_* helpers; also covers the time variables.

    Returns (kind, indices) where kind is one of "y", "x", "z", "w",
    "ta", "td", "tc", "tt".
    """
    parts = name.split("_")
    kind = parts[0]
    arity = {"y": 2, "x": 3, "z": 3, "w": 4, "ta": 1, "td": 1, "tc": 1, "tt": 1}
    if kind not in arity or len(parts) != arity[kind] + 1:
        raise ModelError(f"unknown variable name {name!r}")
    try:
        idx = tuple(int(p) for p in parts[1:])
    except ValueError:
        raise ModelError(f"unknown variable name {name!r}") from None
    return kind, idx


def _variable_names(instance: Instance) -> dict[str, float]:
    """Every model variable, initialized to 0.0, in emission order."""
    names: dict[str, float] = {}
    nodes = [0] + [s.id for s in instance.stations]
    for k in nodes:
        for l in nodes:
            if k != l:
                names[name_y(k, l)] = 0.0
    robots = range(instance.fleet_size)
    stations = [s.id for s in instance.stations]
    customers = [c.id for c in instance.customers]
    for r in robots:
        for k in stations:
            for o in customers:
                names[name_x(r, k, o)] = 0.0
    for r in robots:
        for o in customers:
            for k in stations:
                names[name_z(r, o, k)] = 0.0
    for r in robots:
        for k in stations:
            for o in customers:
                for p in customers:
                    names[name_w(r, k, o, p)] = 0.0
    for k in stations:
        names[f"ta_{k}"] = 0.0
    for k in stations:
        names[f"td_{k}"] = 0.0
    for o in customers:
        names[f"tc_{o}"] = 0.0
    for o in customers:
        names[f"tt_{o}"] = 0.0
    return names


# ---------------------------------------------------------------------------
# LP text assembly


def _num(v: float) -> str:
    """Full-precision literal; integers without a trailing .0."""
    if v == int(v) and abs(v) < 1e15:
        return str(int(v))
    return repr(v)


def _term(coef: float, body: str, first: bool) -> str:
    sign = "-" if coef < 0 else "+"
    mag = abs(coef)
    lead = "" if (first and sign == "+") else sign + " "
    if mag == 1.0:
        return f"{lead}{body}"
    return f"{lead}{_num(mag)} {body}"


def _wrap(line: str, width: int = 220) -> list[str]:
    """Split one logical row onto continuation lines between tokens."""
    if len(line) <= width:
        return [line]
    out = []
    cur = ""
    for tok in line.split(" "):
        if cur and len(cur) + 1 + len(tok) > width:
            out.append(cur)
            cur = "   " + tok
        else:
            cur = tok if not cur else cur + " " + tok
    if cur:
        out.append(cur)
    return out


class _Model:
    """Accumulates LP sections before rendering."""

    def __init__(self):
        self.header: list[str] = []
        self.objective: list[tuple[float, str]] = []
        self.rows: list[str] = []  # already-rendered constraint lines
        self.bounds: list[str] = []
        self.binaries: list[str] = []
        self.n_rows = 0

    def comment(self, text: str = ""):
        self.rows.append(rf"\ {text}" if text else "\\")

    def note(self, text: str = ""):
        """Header comment, rendered before the objective."""
        self.header.append(rf"\ {text}" if text else "\\")

    def row(self, rname: str, linear, quad, sense: str, rhs: float):
        """One constraint; `linear` is [(coef, var)], `quad` is
        [(coef, var_a, var_b)] rendered inside a single bracket."""
        pieces = []
        first = True
        for coef, var in linear:
            if coef == 0.0:
                continue
            pieces.append(_term(coef, var, first))
            first = False
        if quad:
            inner = []
            qfirst = True
            for coef, a, b in quad:
                inner.append(_term(coef, f"{a} * {b}", qfirst))
                qfirst = False
            pieces.append(("" if first else "+ ") + "[ " + " ".join(inner) + " ]")
            first = False
        if not pieces:
            raise ModelError(f"row {rname} has no terms")
        body = " ".join(pieces)
        self.rows.extend(_wrap(f" {rname}: {body} {sense} {_num(rhs)}"))
        self.n_rows += 1

    def render(self) -> str:
        out = list(self.header)
        out.append("Minimize")
        obj = []
        first = True
        for coef, var in self.objective:
            obj.append(_term(coef, var, first))
            first = False
        out.extend(_wrap(" obj: " + " ".join(obj)))
        out.append("Subject To")
        out.extend(self.rows)
        if self.bounds:
            out.append("Bounds")
            out.extend(self.bounds)
        out.append("Binaries")
        line = ""
        for name in self.binaries:
            if line and len(line) + 1 + len(name) > 220:
                out.append(" " + line)
                line = name
            else:
                line = name if not line else line + " " + name
        if line:
            out.append(" " + line)
        out.append("End")
        return "\n".join(out) + "\n"


def _distance_comments(model: _Model, instance: Instance, table: DistanceTable):
    model.note("distances (Euclidean):")
    parts = [f"L_0,{k}={_num(v)}" for k, v in sorted(table.depot_station.items())]
    for chunk in _chunks(parts, 6):
        model.note("  depot-station: " + "  ".join(chunk))
    parts = [
        f"L_{k},{l}={_num(v)}"
        for (k, l), v in sorted(table.station_station.items())
        if k < l
    ]
    for chunk in _chunks(parts, 6):
        model.note("  station-station: " + "  ".join(chunk))
    parts = [f"L_{k},C{o}={_num(v)}" for (k, o), v in sorted(table.station_customer.items())]
    for chunk in _chunks(parts, 4):
        model.note("  station-customer: " + "  ".join(chunk))
    parts = [
        f"L_C{o},C{p}={_num(v)}"
        for (o, p), v in sorted(table.customer_customer.items())
        if o < p
    ]
    model.note("  customer-customer (no constraint uses these; for reference):")
    for chunk in _chunks(parts, 4):
        model.note("    " + "  ".join(chunk))


def _chunks(seq, n):
    for i in range(0, len(seq), n):
        yield seq[i : i + n]


def _common_header(model: _Model, instance: Instance, form: str, arrival_speed: str):
    ns, nr, nc = instance.n_stations, instance.fleet_size, instance.n_customers
    n_bin = (ns + 1) * ns + 2 * nr * ns * nc + nr * ns * nc * nc
    model.note(f"{form} export of the routing model")
    model.note(
        f"instance: {ns} stations, {nr} robots, {nc} customers, "
        f"range={_num(instance.robot_range)}, vehicle_speed={_num(instance.vehicle_speed)}, "
        f"robot_speed={_num(instance.robot_speed)}"
    )
    model.note(
        f"binaries: {n_bin} (y {(ns + 1) * ns}, x {nr * ns * nc}, "
        f"z {nr * ns * nc}, w {nr * ns * nc * nc}); continuous times: {2 * ns + 2 * nc}"
    )
    model.note("row names follow the constraint numbering in docs/MODEL.md")
    model.note("depot departure time is 0 and substituted out of rows (12), (13)")
    if arrival_speed == "robot":
        model.note(
            "arrival rows (13) divide vehicle legs by the robot speed"
            " (arrival_speed='robot'); the default divides by the vehicle speed"
        )
    model.note(
        "w_r_k_o_o variables are declared for completeness and fixed to 0 in Bounds"
    )


def _check_arrival_speed(arrival_speed: str) -> None:
    if arrival_speed not in ARRIVAL_SPEEDS:
        raise ModelError(
            f"arrival_speed must be one of {ARRIVAL_SPEEDS}, got {arrival_speed!r}"
        )


def _emit_linear_core(model: _Model, instance: Instance, table: DistanceTable):
    """Rows (1)-(11): pure-binary structure shared by both forms."""
    stations = [s.id for s in instance.stations]
    customers = [c.id for c in instance.customers]
    robots = range(instance.fleet_size)
    nodes = [0] + stations

    model.comment("(1),(2) the vehicle leaves and re-enters the depot once")
    model.row("c1", [(1.0, name_y(0, k)) for k in stations], [], "=", 1.0)
    model.row("c2", [(1.0, name_y(k, 0)) for k in stations], [], "=", 1.0)

    model.comment("(3),(4) every station is entered once and left once")
    for k in stations:
        model.row(
            f"c3_k{k}", [(1.0, name_y(l, k)) for l in nodes if l != k], [], "=", 1.0
        )
    for k in stations:
        model.row(
            f"c4_k{k}", [(1.0, name_y(k, l)) for l in nodes if l != k], [], "=", 1.0
        )

    if not customers:
        return

    model.comment("(5),(6) per robot and station: at most one first / last service")
    for r in robots:
        for k in stations:
            model.row(
                f"c5_r{r}_k{k}",
                [(1.0, name_x(r, k, o)) for o in customers],
                [],
                "<=",
                1.0,
            )
    for r in robots:
        for k in stations:
            model.row(
                f"c6_r{r}_k{k}",
                [(1.0, name_z(r, o, k)) for o in customers],
                [],
                "<=",
                1.0,
            )

    model.comment("(7) a sortie that starts must end (per robot and station)")
    for r in robots:
        for k in stations:
            lin = [(1.0, name_x(r, k, o)) for o in customers]
            lin += [(-1.0, name_z(r, o, k)) for o in customers]
            model.row(f"c7_r{r}_k{k}", lin, [], "=", 0.0)

    model.comment("(8) service chain continuity at each (station, robot, customer)")
    for k in stations:
        for r in robots:
            for o in customers:
                lin = [(1.0, name_x(r, k, o))]
                lin += [(1.0, name_w(r, k, p, o)) for p in customers if p != o]
                lin += [(-1.0, name_w(r, k, o, p)) for p in customers if p != o]
                lin.append((-1.0, name_z(r, o, k)))
                model.row(f"c8_k{k}_r{r}_o{o}", lin, [], "=", 0.0)

    model.comment("(9) sortie length within robot range (per robot and station)")
    for r in robots:
        for k in stations:
            lin = []
            for o in customers:
                d = table.station_customer[(k, o)]
                lin.append((d, name_x(r, k, o)))
                lin.append((d, name_z(r, o, k)))
            for o in customers:
                for p in customers:
                    if p == o:
                        continue
                    d = table.station_customer[(k, o)] + table.station_customer[(k, p)]
                    lin.append((d, name_w(r, k, o, p)))
            model.row(f"c9_r{r}_k{k}", lin, [], "<=", instance.robot_range)

    model.comment("(10),(11) every customer enters and leaves exactly one chain")
    for o in customers:
        lin = [(1.0, name_x(r, k, o)) for r in robots for k in stations]
        lin += [
            (1.0, name_w(r, k, p, o))
            for r in robots
            for k in stations
            for p in customers
            if p != o
        ]
        model.row(f"c10_o{o}", lin, [], "=", 1.0)
    for o in customers:
        lin = [(1.0, name_z(r, o, k)) for r in robots for k in stations]
        lin += [
            (1.0, name_w(r, k, o, p))
            for r in robots
            for k in stations
            for p in customers
            if p != o
        ]
        model.row(f"c11_o{o}", lin, [], "=", 1.0)


def _emit_objective(model: _Model, instance: Instance):
    model.objective = [(c.importance, f"tt_{c.id}") for c in instance.customers]
    if not model.objective:
        model.objective = [(0.0, name_y(0, instance.stations[0].id))]


def _emit_tail(model: _Model, instance: Instance, bound: float | None):
    """Bounds (w diagonal, optional time caps) and the Binaries list."""
    stations = [s.id for s in instance.stations]
    customers = [c.id for c in instance.customers]
    robots = range(instance.fleet_size)
    for r in robots:
        for k in stations:
            for o in customers:
                model.bounds.append(f" {name_w(r, k, o, o)} = 0")
    if bound is not None:
        for k in stations:
            model.bounds.append(f" ta_{k} <= {_num(bound)}")
        for k in stations:
            model.bounds.append(f" td_{k} <= {_num(bound)}")
        for o in customers:
            model.bounds.append(f" tc_{o} <= {_num(bound)}")
        for o in customers:
            model.bounds.append(f" tt_{o} <= {_num(bound)}")
    names = _variable_names(instance)
    model.binaries = [n for n in names if n[0] in "yxzw"]


def _vehicle_leg_speed(instance: Instance, arrival_speed: str) -> float:
    return instance.vehicle_speed if arrival_speed == "vehicle" else instance.robot_speed


def export_miqcp(instance: Instance, arrival_speed: str = "vehicle") -> str:
    """Render the model with quadratic time-coupling rows.

    Rows (13), (15) and (16) multiply binaries with time variables and
    are emitted as single rows with one quadratic bracket each; (13)
    and (15) are quadratic equalities, which some solvers only accept
    split into a <= and a >= row, and nonconvex handling must be
    enabled where required (for example Gurobi's NonConvex parameter).
    """
    _check_arrival_speed(arrival_speed)
    table = DistanceTable.build(instance)
    stations = [s.id for s in instance.stations]
    customers = [c.id for c in instance.customers]
    robots = range(instance.fleet_size)
    vv = _vehicle_leg_speed(instance, arrival_speed)
    vr = instance.robot_speed

    model = _Model()
    _common_header(model, instance, "MIQCP", arrival_speed)
    model.note(
        "quadratic equalities below are single rows; split each into <= and >="
        " for solvers that reject '=' on quadratic constraints"
    )
    _distance_comments(model, instance, table)
    _emit_objective(model, instance)
    _emit_linear_core(model, instance, table)

    model.comment("(13) arrival time = departure of the predecessor + ride time")
    for k in stations:
        lin = [(1.0, f"ta_{k}")]
        lin.append((-table.depot_station[k] / vv, name_y(0, k)))
        quad = []
        for l in stations:
            if l == k:
                continue
            lin.append((-table.station_station[(l, k)] / vv, name_y(l, k)))
            quad.append((-1.0, name_y(l, k), f"td_{l}"))
        model.row(f"c13_k{k}", lin, quad, "=", 0.0)

    model.comment("(14) the vehicle cannot leave before it arrives")
    for k in stations:
        model.row(f"c14_k{k}", [(1.0, f"td_{k}"), (-1.0, f"ta_{k}")], [], ">=", 0.0)

    model.comment("(15) completion time: first service from arrival, later")
    model.comment("     services from the predecessor's completion")
    for p in customers:
        lin = [(1.0, f"tc_{p}")]
        quad = []
        for r in robots:
            for k in stations:
                lin.append((-table.station_customer[(k, p)] / vr, name_x(r, k, p)))
                quad.append((-1.0, name_x(r, k, p), f"ta_{k}"))
                for o in customers:
                    if o == p:
                        continue
                    ride = (
                        table.station_customer[(k, o)] + table.station_customer[(k, p)]
                    ) / vr
                    lin.append((-ride, name_w(r, k, o, p)))
                    quad.append((-1.0, name_w(r, k, o, p), f"tc_{o}"))
        model.row(f"c15_o{p}", lin, quad, "=", 0.0)

    model.comment("(16) departure waits for every robot's last return")
    for k in stations:
        for r in robots:
            for o in customers:
                lin = [
                    (1.0, f"td_{k}"),
                    (-table.station_customer[(k, o)] / vr, name_z(r, o, k)),
                ]
                quad = [(-1.0, name_z(r, o, k), f"tc_{o}")]
                model.row(f"c16_k{k}_r{r}_o{o}", lin, quad, ">=", 0.0)

    model.comment("(17) tardiness is completion past the deadline, floored at 0")
    for c in instance.customers:
        model.row(
            f"c17_o{c.id}",
            [(1.0, f"tt_{c.id}"), (-1.0, f"tc_{c.id}")],
            [],
            ">=",
            -c.deadline,
        )

    _emit_tail(model, instance, bound=None)
    return model.render()


def export_bigm(instance: Instance, arrival_speed: str = "vehicle") -> str:
    """Render the linearized model: quadratic rows become big-M pairs.

    M is the schedule horizon plus the largest possible single jump of
    the right-hand sides (one vehicle leg time plus one out-and-back
    robot pair time), which keeps every deactivated implication slack
    for any schedule within the horizon.  Time variables are capped at
    the horizon in Bounds; that removes only schedules with avoidable
    waiting, never the tight optimum.
    """
    _check_arrival_speed(arrival_speed)
    table = DistanceTable.build(instance)
    stations = [s.id for s in instance.stations]
    customers = [c.id for c in instance.customers]
    robots = range(instance.fleet_size)
    vv = _vehicle_leg_speed(instance, arrival_speed)
    vr = instance.robot_speed

    h = horizon(instance)
    max_vehicle_leg = max(
        [table.depot_station[k] / vv for k in stations]
        + [
            table.station_station[(k, l)] / vv
            for k in stations
            for l in stations
            if k != l
        ]
    )
    max_robot_leg = max(table.station_customer.values()) / vr if customers else 0.0
    big_m = h + max_vehicle_leg + 2.0 * max_robot_leg

    model = _Model()
    _common_header(model, instance, "big-M MILP", arrival_speed)
    model.note(
        f"M = {_num(big_m)} = horizon {_num(h)} + max vehicle leg time "
        f"{_num(max_vehicle_leg)} + 2 * max robot leg time {_num(max_robot_leg)}"
    )
    model.note("time variables are capped at the horizon in Bounds")
    _distance_comments(model, instance, table)
    _emit_objective(model, instance)
    _emit_linear_core(model, instance, table)

    model.comment("(13) arrival time propagation, as two implications per arc")
    for k in stations:
        ride = table.depot_station[k] / vv
        model.row(
            f"c13a_l0_k{k}",
            [(1.0, f"ta_{k}"), (big_m, name_y(0, k))],
            [],
            "<=",
            ride + big_m,
        )
        model.row(
            f"c13b_l0_k{k}",
            [(1.0, f"ta_{k}"), (-big_m, name_y(0, k))],
            [],
            ">=",
            ride - big_m,
        )
        for l in stations:
            if l == k:
                continue
            ride = table.station_station[(l, k)] / vv
            model.row(
                f"c13a_l{l}_k{k}",
                [(1.0, f"ta_{k}"), (-1.0, f"td_{l}"), (big_m, name_y(l, k))],
                [],
                "<=",
                ride + big_m,
            )
            model.row(
                f"c13b_l{l}_k{k}",
                [(1.0, f"ta_{k}"), (-1.0, f"td_{l}"), (-big_m, name_y(l, k))],
                [],
                ">=",
                ride - big_m,
            )

    model.comment("(14) the vehicle cannot leave before it arrives")
    for k in stations:
        model.row(f"c14_k{k}", [(1.0, f"td_{k}"), (-1.0, f"ta_{k}")], [], ">=", 0.0)

    model.comment("(15) completion time propagation, two implications per")
    model.comment("     first-service and per succession variable")
    for p in customers:
        for r in robots:
            for k in stations:
                ride = table.station_customer[(k, p)] / vr
                base = f"_o{p}_r{r}_k{k}"
                model.row(
                    f"c15a_x{base}",
                    [(1.0, f"tc_{p}"), (-1.0, f"ta_{k}"), (big_m, name_x(r, k, p))],
                    [],
                    "<=",
                    ride + big_m,
                )
                model.row(
                    f"c15b_x{base}",
                    [(1.0, f"tc_{p}"), (-1.0, f"ta_{k}"), (-big_m, name_x(r, k, p))],
                    [],
                    ">=",
                    ride - big_m,
                )
                for o in customers:
                    if o == p:
                        continue
                    ride = (
                        table.station_customer[(k, o)] + table.station_customer[(k, p)]
                    ) / vr
                    pair = f"_o{p}_r{r}_k{k}_p{o}"
                    model.row(
                        f"c15a_w{pair}",
                        [
                            (1.0, f"tc_{p}"),
                            (-1.0, f"tc_{o}"),
                            (big_m, name_w(r, k, o, p)),
                        ],
                        [],
                        "<=",
                        ride + big_m,
                    )
                    model.row(
                        f"c15b_w{pair}",
                        [
                            (1.0, f"tc_{p}"),
                            (-1.0, f"tc_{o}"),
                            (-big_m, name_w(r, k, o, p)),
                        ],
                        [],
                        ">=",
                        ride - big_m,
                    )

    model.comment("(16) departure waits for every robot's last return")
    for k in stations:
        for r in robots:
            for o in customers:
                ride = table.station_customer[(k, o)] / vr
                model.row(
                    f"c16_k{k}_r{r}_o{o}",
                    [
                        (1.0, f"td_{k}"),
                        (-1.0, f"tc_{o}"),
                        (-big_m, name_z(r, o, k)),
                    ],
                    [],
                    ">=",
                    ride - big_m,
                )

    model.comment("(17) tardiness is completion past the deadline, floored at 0")
    for c in instance.customers:
        model.row(
            f"c17_o{c.id}",
            [(1.0, f"tt_{c.id}"), (-1.0, f"tc_{c.id}")],
            [],
            ">=",
            -c.deadline,
        )

    _emit_tail(model, instance, bound=h)
    return model.render()


# ---------------------------------------------------------------------------
# assignments and solution import


def plan_assignment(instance: Instance, plan: RoutePlan) -> dict[str, float]:
    """Variable assignment encoding a plan, times from propagation.

    Covers every model variable (unused binaries are 0).  The plan must
    be structurally sound; range violations are tolerated, matching
    `propagate`.
    """
    values = _variable_names(instance)

    def set_one(name: str):
        if name not in values:
            raise ModelError(f"plan does not fit this instance: no variable {name}")
        values[name] = 1.0

    prev = 0
    for k in plan.tour:
        set_one(name_y(prev, k))
        prev = k
    set_one(name_y(prev, 0))
    for s in plan.sorties:
        set_one(name_x(s.robot, s.station, s.services[0]))
        for o, p in zip(s.services, s.services[1:]):
            set_one(name_w(s.robot, s.station, o, p))
        set_one(name_z(s.robot, s.services[-1], s.station))

    schedule = propagate(instance, plan)
    for k, t in schedule.arrive.items():
        values[f"ta_{k}"] = t
    for k, t in schedule.depart.items():
        values[f"td_{k}"] = t
    for o, t in schedule.complete.items():
        values[f"tc_{o}"] = t
    for o, t in schedule.tardiness.items():
        values[f"tt_{o}"] = t
    return values


def _parse_solution_values(text: str) -> dict[str, float]:
    values: dict[str, float] = {}
    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#") or line.startswith("\\"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise SolutionImportError(f"line {ln}: expected 'name value', got {raw!r}")
        name, val = parts
        try:
            v = float(val)
        except ValueError:
            raise SolutionImportError(f"line {ln}: bad value {val!r}") from None
        if name in values:
            raise SolutionImportError(f"line {ln}: duplicate variable {name}")
        values[name] = v
    return values


def _binary(values: dict[str, float], name: str) -> int:
    v = values.get(name, 0.0)
    if abs(v) <= BINARY_TOLERANCE:
        return 0
    if abs(v - 1.0) <= BINARY_TOLERANCE:
        return 1
    raise SolutionImportError(f"{name} = {v} is fractional; expected 0 or 1")


def import_solution(instance: Instance, text: str) -> tuple[RoutePlan, Schedule]:
    """Rebuild a plan and schedule from a solver solution file.

    Binaries may be absent (treated as 0) and may carry solver noise up
    to 1e-4.  The schedule is recomputed by propagation; reported time
    values that disagree by more than 1e-4 are logged as warnings, not
    errors, since solvers may return non-tight schedules.
    """
    values = _parse_solution_values(text)
    known = _variable_names(instance)
    for name in values:
        if name not in known:
            raise SolutionImportError(f"unknown variable {name}")

    stations = [s.id for s in instance.stations]
    customers = [c.id for c in instance.customers]
    robots = range(instance.fleet_size)
    nodes = [0] + stations

    succ: dict[int, int] = {}
    n_arcs = 0
    for k in nodes:
        for l in nodes:
            if k == l:
                continue
            if _binary(values, name_y(k, l)):
                if k in succ:
                    raise SolutionImportError(f"node {k} has two outgoing vehicle arcs")
                succ[k] = l
                n_arcs += 1
    if n_arcs != len(stations) + 1:
        raise SolutionImportError(
            f"expected {len(stations) + 1} vehicle arcs, found {n_arcs}"
        )
    tour = []
    at = 0
    while True:
        if at not in succ:
            raise SolutionImportError(f"vehicle route dangles at node {at}")
        at = succ[at]
        if at == 0:
            break
        if at in tour:
            raise SolutionImportError(f"vehicle route revisits station {at}")
        tour.append(at)
    if len(tour) != len(stations):
        raise SolutionImportError(
            "vehicle arcs form a subtour that skips some stations"
        )

    sorties = []
    used_w = set()
    for k in stations:
        for r in robots:
            firsts = [o for o in customers if _binary(values, name_x(r, k, o))]
            if len(firsts) > 1:
                raise SolutionImportError(
                    f"robot {r} at station {k} has {len(firsts)} first services"
                )
            if not firsts:
                continue
            chain = [firsts[0]]
            while True:
                o = chain[-1]
                ends = _binary(values, name_z(r, o, k))
                nexts = [
                    p for p in customers if p != o and _binary(values, name_w(r, k, o, p))
                ]
                if ends and nexts:
                    raise SolutionImportError(
                        f"service chain at (r{r}, S{k}) both ends and continues at C{o}"
                    )
                if ends:
                    break
                if not nexts:
                    raise SolutionImportError(
                        f"service chain at (r{r}, S{k}) dangles after C{o}"
                    )
                if len(nexts) > 1:
                    raise SolutionImportError(
                        f"service chain at (r{r}, S{k}) branches after C{o}"
                    )
                if nexts[0] in chain:
                    raise SolutionImportError(
                        f"service chain at (r{r}, S{k}) cycles at C{nexts[0]}"
                    )
                used_w.add((r, k, o, nexts[0]))
                chain.append(nexts[0])
            sorties.append(Sortie(robot=r, station=k, services=tuple(chain)))

    for r in robots:
        for k in stations:
            for o in customers:
                for p in customers:
                    if o == p:
                        continue
                    if _binary(values, name_w(r, k, o, p)) and (r, k, o, p) not in used_w:
                        raise SolutionImportError(
                            f"succession {name_w(r, k, o, p)} is set but belongs to no chain"
                        )

    order = {k: i for i, k in enumerate(tour)}
    sorties.sort(key=lambda s: (order[s.station], s.robot))
    plan = RoutePlan(tour=tuple(tour), sorties=tuple(sorties))
    violations = validate(instance, plan)
    if violations:
        raise SolutionImportError(
            "imported plan is infeasible: " + "; ".join(v.detail for v in violations)
        )

    schedule = propagate(instance, plan)
    recomputed = {}
    for k in stations:
        recomputed[f"ta_{k}"] = schedule.arrive[k]
        recomputed[f"td_{k}"] = schedule.depart[k]
    for o in customers:
        recomputed[f"tc_{o}"] = schedule.complete[o]
        recomputed[f"tt_{o}"] = schedule.tardiness[o]
    for name, want in recomputed.items():
        if name in values and abs(values[name] - want) > TIME_MISMATCH_TOLERANCE:
            logger.warning(
                "solution reports %s = %s, propagation gives %s",
                name,
                values[name],
                want,
            )
    return plan, schedule
