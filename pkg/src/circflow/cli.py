"""``cfn`` command line: batch computation over graph6 input."""

from __future__ import annotations

import collections
import json
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Iterator, TextIO

import click

from .graph import GraphError
from .graph6 import Graph6Error, parse_graph6, read_graph6_lines, write_graph6
from .solver import (
    AtLeastFive,
    BridgedGraphError,
    SolverTimeout,
    circular_flow_number,
    default_jobs,
    format_fraction,
    max_min_or_marker,
    naive_max_min_fraction,
    phi_at_least,
)


@dataclass
class Record:
    line: int
    graph6: str
    result: str
    millis: int
    error: str | None = None

    def as_dict(self) -> dict:
        out = {"line": self.line, "graph6": self.graph6, "result": self.result, "millis": self.millis}
        if self.error:
            out["error"] = self.error
        return out


# -- per-graph tasks (module level so worker processes can import them) ------


def _compute_task(text: str, timeout: float | None, bisection_jobs: int) -> tuple[str, str | None]:
    g = parse_graph6(text)
    try:
        return str(circular_flow_number(g, jobs=bisection_jobs, timeout=timeout)), None
    except SolverTimeout:
        return "timeout", None
    except BridgedGraphError:
        return "inf", None


def _bound_task(text: str, r: Fraction, timeout: float | None, bisection_jobs: int) -> tuple[str, str | None]:
    g = parse_graph6(text)
    try:
        return ("ge" if phi_at_least(g, r, jobs=bisection_jobs, timeout=timeout) else "lt"), None
    except SolverTimeout:
        return "timeout", None
    except BridgedGraphError:
        return "ge", None


def _oracle_task(text: str, timeout: float | None, bisection_jobs: int) -> tuple[str, str | None]:
    g = parse_graph6(text)
    pruned = max_min_or_marker(g)
    naive = naive_max_min_fraction(g)
    render = lambda x: str(x) if isinstance(x, AtLeastFive) else format_fraction(x)  # noqa: E731
    if pruned == naive:
        return render(pruned), None
    return "mismatch", f"pruned {render(pruned)} vs naive {render(naive)}"


def _timed(task: Callable, text: str, *args) -> tuple[str, int, str | None]:
    start = time.perf_counter()
    try:
        result, problem = task(text, *args)
    except GraphError as exc:
        result, problem = "error", str(exc)
    return result, int((time.perf_counter() - start) * 1000), problem


def _run_batch(
    lines: Iterable[str], task: Callable, args: tuple, jobs: int
) -> Iterator[Record]:
    """Yield records in input order; parse errors become error records."""
    pending = list(read_graph6_lines(lines))
    good = [(number, text) for number, text, item in pending if not isinstance(item, Graph6Error)]
    if jobs > 1 and len(good) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            futures = {number: pool.submit(_timed, task, text, *args) for number, text in good}
            results = {number: f.result() for number, f in futures.items()}
    else:
        results = {number: _timed(task, text, *args) for number, text in good}
    for number, text, item in pending:
        if isinstance(item, Graph6Error):
            yield Record(number, text, "error", 0, str(item))
        else:
            result, millis, problem = results[number]
            yield Record(number, text, result, millis, problem)


def _histogram_key(result: str) -> tuple:
    if "/" in result or result.isdigit():
        return (0, Fraction(result))
    return (1, result)


def _emit(records: Iterable[Record], fmt: str, out: TextIO, bad_results: set[str]) -> int:
    """Write records plus a histogram summary; return the exit status."""
    status = 0
    rows = []
    counts: collections.Counter[str] = collections.Counter()
    for rec in records:
        rows.append(rec)
        counts[rec.result] += 1
        if rec.error:
            click.echo(f"line {rec.line}: {rec.error}", err=True)
        if rec.result in bad_results:
            status = 1
        if fmt == "tsv":
            out.write(f"{rec.graph6}\t{rec.result}\t{rec.millis}\n")
            out.flush()
    histogram = ", ".join(f"{k}: {counts[k]}" for k in sorted(counts, key=_histogram_key))
    if fmt == "json":
        json.dump({"records": [r.as_dict() for r in rows], "histogram": dict(counts)}, out, indent=1)
        out.write("\n")
    else:
        out.write(f"# histogram {histogram}\n")
    return status


# -- click wiring ------------------------------------------------------------

_jobs = click.option(
    "--jobs", "-j", type=click.IntRange(min=1), default=None,
    help="Worker processes (default: $CFN_JOBS or 1).",
)
_format = click.option("--format", "fmt", type=click.Choice(["tsv", "json"]), default="tsv", show_default=True)
_timeout = click.option("--timeout", type=click.FloatRange(min=0, min_open=True), default=None,
                        help="Per-graph time limit in seconds.")
_split = click.option("--split-bisections", is_flag=True,
                      help="Spend the workers on the bisections of each graph instead of on separate graphs.")
_progress = click.option("--progress", is_flag=True, help="Report each finished graph on stderr.")


def _plan(jobs: int | None, split: bool) -> tuple[int, int]:
    jobs = jobs or default_jobs()
    return (1, jobs) if split else (jobs, 1)


def _progress_wrap(records: Iterable[Record], enabled: bool) -> Iterator[Record]:
    for rec in records:
        if enabled:
            click.echo(f"[{rec.line}] {rec.result} ({rec.millis} ms)", err=True)
        yield rec


@click.group()
def main() -> None:
    """Exact circular flow numbers of bridgeless cubic graphs."""


@main.command()
@click.argument("file", type=click.File("r"), default="-")
@_jobs
@_format
@_timeout
@_split
@_progress
def compute(file, jobs, fmt, timeout, split_bisections, progress) -> None:
    """Circular flow number of each graph6 line: p/q, or >=5."""
    graph_jobs, bisection_jobs = _plan(jobs, split_bisections)
    records = _run_batch(file, _compute_task, (timeout, bisection_jobs), graph_jobs)
    sys.exit(_emit(_progress_wrap(records, progress), fmt, click.get_text_stream("stdout"), {"error"}))


def _parse_bound(text: str) -> Fraction:
    try:
        r = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise click.BadParameter(f"{text!r} is not a fraction P/Q") from None
    if not 2 < r <= 5:
        raise click.BadParameter(f"bound {text} outside (2, 5]")
    return r


@main.command()
@click.argument("r", metavar="P/Q")
@click.argument("file", type=click.File("r"), default="-")
@_jobs
@_format
@_timeout
@_split
@_progress
def bound(r, file, jobs, fmt, timeout, split_bisections, progress) -> None:
    """Report ge or lt: whether the circular flow number is at least P/Q."""
    value = _parse_bound(r)
    graph_jobs, bisection_jobs = _plan(jobs, split_bisections)
    records = _run_batch(file, _bound_task, (value, timeout, bisection_jobs), graph_jobs)
    sys.exit(_emit(_progress_wrap(records, progress), fmt, click.get_text_stream("stdout"), {"error"}))


@main.command(name="oracle-check")
@click.argument("file", type=click.File("r"), default="-")
@_jobs
@_format
@_progress
def oracle_check(file, jobs, fmt, progress) -> None:
    """Compare the pruned max-min fraction with the exhaustive oracle."""
    graph_jobs, _ = _plan(jobs, False)
    records = _run_batch(file, _oracle_task, (None, 1), graph_jobs)
    sys.exit(
        _emit(_progress_wrap(records, progress), fmt, click.get_text_stream("stdout"), {"error", "mismatch"})
    )


@main.command()
@click.argument("family", type=click.Choice(["petersen", "flower", "goldberg", "s-snark", "named"]))
@click.argument("param", required=False)
def generate(family, param) -> None:
    """Print graph6 of a family member: flower T, goldberg T, s-snark K, named NAME."""
    from . import families

    try:
        if family == "petersen":
            g = families.petersen()
        elif family == "named":
            if not param:
                raise click.UsageError(f"named needs one of: {', '.join(families.NAMED_SNARKS)}")
            g = families.named_snark(param)
        else:
            if param is None or not param.lstrip("-").isdigit():
                raise click.UsageError(f"{family} needs an integer parameter")
            n = int(param)
            g = {"flower": families.flower, "goldberg": families.goldberg, "s-snark": families.s_snark}[family](n)
    except (GraphError, KeyError, FileNotFoundError) as exc:
        raise click.ClickException(str(exc)) from None
    click.echo(write_graph6(g))


@main.command()
@click.argument("file", type=click.File("r"), default="-")
@click.option("--gadgets", "gadget_file", type=click.File("r"), default=None,
              help="Gadget template file (default: the two shipped templates).")
@_jobs
def reduce(file, gadget_file, jobs) -> None:
    """Reduce each graph to cubic leaves and decide whether its flow number is >= 5."""
    from .expansion import decide_phi_ge_5, default_gadgets, parse_gadgets

    gadgets = parse_gadgets(gadget_file) if gadget_file else default_gadgets()
    jobs = jobs or default_jobs()
    out = click.get_text_stream("stdout")
    status = 0
    for number, text, item in read_graph6_lines(file):
        if isinstance(item, Graph6Error):
            click.echo(f"line {number}: {item}", err=True)
            status = 1
            continue
        try:
            decision = decide_phi_ge_5(item, gadgets, jobs=jobs)
        except GraphError as exc:
            click.echo(f"line {number}: {exc}", err=True)
            status = 1
            continue
        out.write(f"# graph {text}\n")
        for leaf in decision.tree.leaves:
            flag = "\tbridged" if leaf.bridged else ""
            out.write(f"{write_graph6(leaf.graph)}{flag}\n")
        verdict = "ge" if decision.at_least_five else "lt"
        witness = f"\twitness {write_graph6(decision.witness)}" if decision.witness is not None else ""
        out.write(f"{text}\t{verdict}{witness}\n")
    sys.exit(status)


if __name__ == "__main__":
    main()
