"""
Console output with Rich for check runs.

Everything here goes to stderr so that JSON reports on stdout stay clean.
"""

import logging
import time
from datetime import datetime
from typing import Dict, Iterable, List, Optional, Sequence

from rich import box
from rich.console import Console
from rich.logging import RichHandler
from rich.panel import Panel
from rich.table import Table

from .schemas import Status, Verdict

console = Console(stderr=True)

STATUS_STYLE = {Status.HOLDS: "bold green", Status.FAILS: "bold red", Status.UNKNOWN: "bold yellow"}


def setup_logging(verbose: bool = False) -> None:
    """Route library loggers through Rich on stderr."""
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.WARNING,
        format="%(message)s",
        datefmt="[%X]",
        handlers=[RichHandler(console=console, show_path=False, rich_tracebacks=True)],
        force=True,
    )


class CheckLogger:
    """Step-by-step console log for one command"""

    def __init__(self, quiet: bool = False):
        self.quiet = quiet
        self.start_time: Optional[float] = None
        self.step_times: Dict[str, float] = {}
        self.current_step: Optional[str] = None
        self.step_start_time = 0.0

    def _line(self, body: str) -> None:
        if self.quiet:
            return
        timestamp = datetime.now().strftime("%H:%M:%S")
        console.print(f"[dim]{timestamp}[/dim] [bold white]│[/bold white] {body}")

    def print_header(self, command: str, seed: int):
        self.start_time = time.time()
        if self.quiet:
            return
        console.print()
        console.print(
            Panel.fit(
                f"[bold cyan]MONOMORPHISM CATEGORIES[/bold cyan] [dim]·[/dim] [bold]{command}[/bold]\n"
                f"[dim]seed {seed}[/dim]",
                border_style="cyan",
                box=box.DOUBLE,
            )
        )
        console.print()

    def step(self, step_num: int, title: str):
        if self.current_step:
            self.step_times[self.current_step] = time.time() - self.step_start_time
        self.current_step = title
        self.step_start_time = time.time()
        self._line(f"[bold cyan]Step {step_num}:[/bold cyan] [bold]{title}[/bold]")

    def info(self, message: str, indent: int = 1):
        self._line(f"{'  ' * indent}[blue]→[/blue] {message}")

    def warning(self, message: str):
        self._line(f"[bold yellow]⚠[/bold yellow]  {message}")

    def error(self, message: str):
        self._line(f"[bold red]✗[/bold red] {message}")

    def verdict(self, v: Verdict):
        style = STATUS_STYLE[v.status]
        self._line(f"[{style}]{v.status.value.upper()}[/{style}] {v.check}")
        if v.witness and not self.quiet:
            for key, value in sorted(v.witness.items()):
                console.print(f"         [dim]{key}:[/dim] {value}")

    def print_verdict_table(self, verdicts: Sequence[Verdict], title: str = "Checks"):
        if self.quiet:
            return
        table = Table(title=title, box=box.ROUNDED, show_header=True, header_style="bold cyan")
        table.add_column("Check", style="cyan", no_wrap=True)
        table.add_column("Status")
        table.add_column("Cutoffs", style="dim")
        for v in verdicts:
            style = STATUS_STYLE[v.status]
            cutoffs = ", ".join(f"{k}={c}" for k, c in sorted(v.cutoffs.items()))
            table.add_row(v.check, f"[{style}]{v.status.value}[/{style}]", cutoffs)
        console.print()
        console.print(table)
        console.print()

    def print_dimension_table(self, title: str, columns: List[str], rows: Iterable[Sequence]):
        """Ext tables and oracle counts"""
        if self.quiet:
            return
        table = Table(title=title, box=box.ROUNDED, show_header=True, header_style="bold cyan")
        for k, name in enumerate(columns):
            table.add_column(name, justify="left" if k == 0 else "right")
        for row in rows:
            table.add_row(*(str(c) for c in row))
        console.print()
        console.print(table)
        console.print()

    def print_footer(self, status: Optional[Status] = None):
        if self.current_step:
            self.step_times[self.current_step] = time.time() - self.step_start_time
            self.current_step = None
        if self.quiet or self.start_time is None:
            return
        total_time = time.time() - self.start_time
        console.print("─" * 80)
        timing_table = Table(title="Timing", box=box.SIMPLE, show_header=True, header_style="bold cyan")
        timing_table.add_column("Step", style="cyan")
        timing_table.add_column("Duration", justify="right", style="bold white")
        timing_table.add_column("% of Total", justify="right", style="dim")
        for step, duration in self.step_times.items():
            percentage = (duration / total_time * 100) if total_time > 0 else 0
            timing_table.add_row(step, f"{duration:.2f}s", f"{percentage:.1f}%")
        timing_table.add_row("[bold]TOTAL[/bold]", f"[bold]{total_time:.2f}s[/bold]", "[bold]100%[/bold]")
        console.print(timing_table)
        if status is not None:
            style = STATUS_STYLE[status]
            console.print(Panel.fit(f"[{style}]{status.value.upper()}[/{style}]\n[dim]in {total_time:.2f} seconds[/dim]",
                                    border_style=style.split()[-1], box=box.DOUBLE))
        console.print()
