"""Rich-based terminal output for slopegap."""

from contextlib import contextmanager

import mpmath
from rich import box
from rich.console import Console
from rich.panel import Panel
from rich.table import Table
from rich.text import Text

ACCENT = "bright_cyan"
WARN = "bright_yellow"
ERROR = "bright_red"
SUCCESS = "bright_green"
DIM = "dim"

BANNER = "slopegap · slope gaps of Veech surfaces"


class Display:
    def __init__(self, console=None, animate=True):
        self.console = console or Console()
        self.animate = animate

    def show_banner(self, subtitle=""):
        self.console.print(
            Panel(
                Text(BANNER, style=f"bold {ACCENT}"),
                subtitle=f"[dim]{subtitle}[/]" if subtitle else None,
                border_style=ACCENT,
                box=box.DOUBLE_EDGE,
                padding=(0, 2),
            )
        )

    @contextmanager
    def working(self, message):
        """Spinner while a stage runs."""
        if not self.animate:
            self.console.print(f"  [bold {ACCENT}]>[/] {message}")
            yield
            return
        with self.console.status(f"[bold bright_white]{message}[/]", spinner="dots", spinner_style=ACCENT):
            yield
        self.console.print(f"  [bold {ACCENT}]>[/] {message} [dim]done[/]")

    def config_summary(self, rows):
        table = Table(box=box.SIMPLE_HEAVY, show_header=False, border_style="bright_blue")
        table.add_column("", style="bold bright_white")
        table.add_column("")
        for key, value in rows:
            table.add_row(key, value)
        self.console.print(table)

    def show_winners(self, records):
        table = Table(
            title="[bold]Winners on the top edge[/]",
            box=box.SIMPLE_HEAVY,
            title_style="bold bright_white",
            border_style="bright_blue",
        )
        table.add_column("#", justify="right", style="bold")
        table.add_column("vector", style="bold bright_white")
        table.add_column("sheared")
        table.add_column("interval (a_next, a]", justify="center")
        for r in records:
            table.add_row(
                str(r.index),
                _vec(r.vector),
                _vec(r.sheared),
                f"({float(r.a_next):.9f}, {float(r.a_cur):.9f}]",
            )
        self.console.print()
        self.console.print(table)

    def show_regions(self, regions, omega_area):
        table = Table(
            title="[bold]Winner regions[/]",
            box=box.SIMPLE_HEAVY,
            title_style="bold bright_white",
            border_style="bright_blue",
        )
        table.add_column("#", justify="right", style="bold")
        table.add_column("winner")
        table.add_column("pieces", justify="right")
        table.add_column("vertices", justify="right")
        table.add_column("area", justify="right")
        table.add_column("share", justify="left")
        for region in regions:
            share = float(region.area()) / float(omega_area)
            table.add_row(
                str(region.record.index),
                _vec(region.vector),
                str(len(region.pieces)),
                str(sum(len(p.vertices) for p in region.pieces)),
                f"{float(region.area()):.12f}",
                _bar(share, ACCENT),
            )
        self.console.print()
        self.console.print(table)
        self.console.print(f"  [dim]area of Ω = {float(omega_area):.12f}[/]")

    def show_breakpoints(self, breakpoints, expected=()):
        table = Table(
            title="[bold]Non-analyticity points[/]",
            box=box.SIMPLE_HEAVY,
            title_style="bold bright_white",
            border_style="bright_blue",
        )
        table.add_column("#", justify="right", style="bold")
        table.add_column("t", justify="right", style="bold bright_white")
        table.add_column("regions", justify="center")
        if expected:
            table.add_column("reference", justify="right", style=DIM)
        for i, bp in enumerate(breakpoints):
            row = [str(i + 1), f"{bp.decimal:.9f}", ", ".join(str(k) for k in bp.regions)]
            if expected:
                row.append(f"{expected[i]:g}" if i < len(expected) else "-")
            table.add_row(*row)
        self.console.print()
        self.console.print(table)

    def show_volume(self, result, expected=None):
        if result.divergent:
            self.error("the return time is not integrable over Ω (a region touches u = 0 or b = 0)")
            return
        color = SUCCESS if result.converged else WARN
        lines = [
            f"[bold {color}]{mpmath.nstr(result.value, 16)}[/]  [dim]± {mpmath.nstr(result.error, 2)}[/]",
        ]
        if expected is not None:
            lines.append(f"[dim]reference {expected!r}, deviation {float(abs(result.value - expected)):.2g}[/]")
        for r in result.regions:
            lines.append(f"[dim]region {r.index}: {mpmath.nstr(r.value, 12)}[/]")
        self.console.print()
        self.console.print(
            Panel("\n".join(lines), title="[bold]Volume[/]", border_style=color, box=box.HEAVY, padding=(0, 2))
        )

    def show_distribution(self, rows, limit=12):
        table = Table(
            title="[bold]Gap distribution[/]",
            box=box.SIMPLE_HEAVY,
            title_style="bold bright_white",
            border_style="bright_blue",
        )
        table.add_column("t", justify="right")
        table.add_column("pdf", justify="right")
        table.add_column("cdf", justify="right")
        step = max(1, len(rows) // limit)
        for t, f, c in rows[::step]:
            table.add_row(mpmath.nstr(t, 6), mpmath.nstr(f, 8) if f is not None else "-", mpmath.nstr(c, 8))
        self.console.print()
        self.console.print(table)
        self.console.print("  [dim]use --csv for the full grid[/]")

    def show_empirical(self, summary):
        lines = [
            f"[bold]R[/] = {summary['radius']:g}   [bold]saddle connections[/] {summary['connections']}"
            f"   [bold]slopes[/] {summary['slopes']}",
            f"[bold]min gap[/] {summary['min_gap']:.6g}   [bold]mean gap[/] {summary['mean_gap']:.6g}",
        ]
        if "ks_distance" in summary:
            lines.append(f"[bold]KS distance[/] {summary['ks_distance']:.4g}")
        self.console.print()
        self.console.print(
            Panel("\n".join(lines), title="[bold]Empirical gaps[/]", border_style=ACCENT, box=box.ROUNDED, padding=(0, 2))
        )

    def show_closed_form(self, report):
        table = Table(
            title="[bold]Closed form vs sweep[/]",
            box=box.SIMPLE_HEAVY,
            title_style="bold bright_white",
            border_style="bright_blue",
        )
        table.add_column("branch", style="bold")
        table.add_column("samples", justify="right")
        table.add_column("max |Δ|", justify="right")
        table.add_column("at t", justify="right", style=DIM)
        for b in report.branches:
            color = SUCCESS if b.max_deviation <= report.tolerance else ERROR
            table.add_row(
                b.label,
                str(b.samples),
                f"[{color}]{b.max_deviation:.2e}[/]",
                f"{b.worst_t:.6g}" if b.worst_t is not None else "-",
            )
        self.console.print()
        self.console.print(table)
        self.console.print(
            f"  [dim]normalized cdf: max |Δ| {report.total_max_deviation:.2e} at t = {report.total_worst_t:.6g}[/]"
        )

    def show_check(self, result):
        mark = f"[bold {SUCCESS}]PASS[/]" if result.passed else f"[bold {ERROR}]FAIL[/]"
        self.console.print(f"  {mark} [bold]{result.name}[/] [dim]({result.seconds:.1f}s)[/]  {result.measured}")

    def show_checks(self, results):
        passed = sum(r.passed for r in results)
        color = SUCCESS if passed == len(results) else ERROR
        self.console.print()
        self.console.print(
            Panel(
                f"[bold {color}]{passed}/{len(results)} checks passed[/]",
                title="[bold]VERIFY[/]",
                border_style=color,
                box=box.DOUBLE_EDGE,
                padding=(0, 2),
            )
        )

    def error(self, message):
        self.console.print()
        self.console.print(
            Panel(
                f"[bold {ERROR}]{message}[/]",
                title="[bold red]ERROR[/]",
                border_style=ERROR,
                box=box.HEAVY,
                padding=(0, 2),
            )
        )


def _vec(v):
    return f"({float(v.x):.7f}, {float(v.y):.7f})"


def _bar(share, color, width=20):
    filled = int(round(share * width))
    return f"[{color}]{'█' * filled}{'░' * (width - filled)}[/] [{color}]{share:.1%}[/]"
