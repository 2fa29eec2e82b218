"""Console rendering and output emitters for scaffold-gms."""

import csv
import io
import json
from typing import Any, Dict, Iterable, List, Mapping, Optional, Sequence

import click
from rich import box
from rich.align import Align
from rich.console import Console
from rich.panel import Panel
from rich.progress import Progress, SpinnerColumn, TextColumn
from rich.table import Table
from rich.text import Text
from rich.theme import Theme

THEME = Theme({
    "info": "cyan",
    "warning": "yellow",
    "error": "red bold",
    "success": "green bold",
    "header": "blue bold",
    "dim": "grey70",
})

# Fields rendered in set notation {0,1,2}
SET_FIELDS = ("dd", "ee")


def format_set(values: Iterable[int]) -> str:
    return "{" + ",".join(str(v) for v in values) + "}"


def format_cell(key: str, value: Any) -> str:
    """Render one field for CSV and table output."""
    if value is None:
        return ""
    if key in SET_FIELDS:
        return format_set(value)
    if isinstance(value, (list, tuple)):
        return " ".join(str(v) for v in value)
    if isinstance(value, bool):
        return "true" if value else "false"
    return str(value)


class UIManager:
    """Manages terminal output for the command-line tool."""

    def __init__(self):
        """Initialize UI Manager."""
        self.console = Console(theme=THEME)
        self.err_console = Console(theme=THEME, stderr=True)

    def display_header(self, title: str, subtitle: Optional[str] = None):
        """Display a title panel above table output."""
        header = Panel(
            Align(Text(title, style="bold blue"), align="center"),
            subtitle=subtitle,
            box=box.DOUBLE,
        )
        self.console.print(header)

    def emit_json(self, data: Any):
        click.echo(json.dumps(data, indent=2))

    def emit_csv(self, rows: Sequence[Mapping[str, Any]], columns: Sequence[str]):
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([format_cell(key, row.get(key)) for key in columns])
        click.echo(buffer.getvalue(), nl=False)

    def display_rows(self, rows: Sequence[Mapping[str, Any]], columns: Sequence[str], title: Optional[str] = None):
        """Display rows in a styled table."""
        table = Table(title=title, box=box.ROUNDED, show_header=True, header_style="bold cyan")
        for key in columns:
            table.add_column(key, style="cyan" if key in ("p", "n", "b", "h") else None)
        for row in rows:
            cells = []
            for key in columns:
                text = format_cell(key, row.get(key))
                if key == "free":
                    text = "[success]yes[/success]" if row.get(key) else "[error]no[/error]"
                cells.append(text)
            table.add_row(*cells)
        self.console.print(table)

    def display_mapping(self, data: Mapping[str, Any], title: Optional[str] = None):
        """Display one record as a two-column property table."""
        table = Table(title=title, box=box.ROUNDED, show_header=True, header_style="bold cyan")
        table.add_column("Property", style="cyan")
        table.add_column("Value", style="green")
        for key, value in data.items():
            table.add_row(key, format_cell(key, value))
        self.console.print(table)

    def emit(
        self,
        rows: List[Dict[str, Any]],
        columns: Sequence[str],
        fmt: str,
        title: Optional[str] = None,
        single: bool = False,
    ):
        """Write rows in the requested format; ``single`` emits one JSON object."""
        if fmt == "json":
            self.emit_json(rows[0] if single else rows)
        elif fmt == "csv":
            self.emit_csv(rows, columns)
        elif single:
            self.display_mapping(rows[0], title=title)
        else:
            self.display_rows(rows, columns, title=title)

    def display_summary(self, counts: Mapping[str, Mapping[str, int]], verdict: str, passed: bool):
        """Display verification counts per check family."""
        table = Table(box=box.ROUNDED, show_header=True, header_style="bold cyan")
        table.add_column("Check", style="cyan")
        table.add_column("Run", justify="right")
        table.add_column("Failed", justify="right")
        for name, row in counts.items():
            failed = row["failed"]
            table.add_row(name, str(row["run"]), f"[error]{failed}[/error]" if failed else "0")
        style = "success" if passed else "error"
        self.console.print(Panel(table, title=f"[{style}]{verdict}[/{style}]", box=box.ROUNDED))

    def display_loading(self, message: str) -> Progress:
        """Transient spinner on stderr."""
        progress = Progress(
            SpinnerColumn(),
            TextColumn("[progress.description]{task.description}"),
            console=self.err_console,
            transient=True,
        )
        progress.add_task(description=message, total=None)
        return progress

    def emit_error(self, error: Mapping[str, Any]):
        """Machine-readable error object on stderr."""
        click.echo(json.dumps({"error": dict(error)}), err=True)

    def display_success(self, message: str):
        """Display a success message."""
        self.err_console.print(f"[success]✓[/success] {message}")

    def display_error(self, message: str):
        """Display an error message."""
        self.err_console.print(f"[error]✗[/error] {message}")

    def display_warning(self, message: str):
        """Display a warning message."""
        self.err_console.print(f"[warning]![/warning] {message}")
