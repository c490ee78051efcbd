"""``tritassert`` command-line entry point.

Exit codes: 0 success, 1 assertion error, 2 usage or parse error,
3 simulation error.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import corpus
from .assertions import assertion_metrics, run_assertions
from .circuit import DENSE_MAX_QUTRITS, Circuit, metrics, oracle_state, simulate
from .dsl import load
from .errors import InputError, NumericalError, ParseError, ResourceError
from .state import StateVector, fidelity

EXIT_OK = 0
EXIT_ASSERTION = 1
EXIT_USAGE = 2
EXIT_SIMULATION = 3

AMPLITUDE_THRESHOLD = 1e-9
ORACLE_TOLERANCE = 1e-9
CORPUS_PREFIX = "corpus:"


class UsageError(Exception):
    pass


# -- formatting -------------------------------------------------------------------


def _clean(x: float) -> float:
    return 0.0 if abs(x) < 5e-13 else x


def format_complex(z: complex) -> str:
    """Rectangular ``a+bi`` with 6 significant digits."""
    re, im = _clean(z.real), _clean(z.imag)
    return f"{re:.6g}{im:+.6g}i"


def state_terms(state: StateVector) -> dict[str, str]:
    return {label: format_complex(a) for label, a in state.terms(AMPLITUDE_THRESHOLD)}


def format_state(state: StateVector) -> str:
    return " + ".join(f"({amp})|{label}⟩" for label, amp in state_terms(state).items())


def _digits_key(digits) -> str:
    return "".join(str(d) for d in digits)


# -- loading ------------------------------------------------------------------------


def _parse_input_digits(text: str | None):
    if text is None:
        return None
    if len(text) != 2 or any(ch not in "012" for ch in text):
        raise UsageError(f"--input needs two trits such as 01, got {text!r}")
    return int(text[0]), int(text[1])


def load_target(args) -> tuple[str, Circuit, list]:
    """Resolve a file path or ``corpus:<name>`` into (name, circuit, specs)."""
    source = args.source
    inputs = _parse_input_digits(getattr(args, "input", None))
    if source.startswith(CORPUS_PREFIX):
        name = source[len(CORPUS_PREFIX):]
        try:
            entry = corpus.build(name, with_bug=args.bug, inputs=inputs)
        except InputError as exc:
            raise UsageError(str(exc)) from None
        label = name + ("_bug" if args.bug else "")
        return label, entry.circuit, list(entry.specs)
    if args.bug or inputs is not None:
        raise UsageError("--bug and --input only apply to corpus:<name> sources")
    path = Path(source)
    try:
        circuit, specs = load(path)
    except OSError as exc:
        raise UsageError(f"cannot read {source}: {exc.strerror or exc}") from None
    return path.stem, circuit, specs


def _circuit_summary(name: str, circuit: Circuit) -> dict:
    m = metrics(circuit)
    return {"name": name, "qutrits": circuit.num_qutrits, "cost": m.quantum_cost, "depth": m.depth}


def _emit(args, payload: dict, lines: list[str]) -> None:
    if args.json:
        print(json.dumps(payload, sort_keys=True, indent=2))
    else:
        print("\n".join(lines))


def _header(summary: dict) -> str:
    return (
        f"circuit {summary['name']}: {summary['qutrits']} qutrits, "
        f"cost {summary['cost']}, depth {summary['depth']}"
    )


# -- commands ----------------------------------------------------------------------------


def cmd_simulate(args) -> int:
    name, circuit, _ = load_target(args)
    trace = simulate(circuit)
    summary = _circuit_summary(name, circuit)
    payload = {"circuit": summary, "final": state_terms(trace.final)}
    lines = [_header(summary)]
    if args.slices:
        payload["slices"] = {n: state_terms(trace.slices[n]) for n, _ in circuit.slices}
        lines += [f"slice {n}: {format_state(trace.slices[n])}" for n, _ in circuit.slices]
    lines.append(f"final: {format_state(trace.final)}")
    _emit(args, payload, lines)
    return EXIT_OK


def cmd_assert(args) -> int:
    if args.shots < 1:
        raise UsageError(f"--shots must be at least 1, got {args.shots}")
    name, circuit, specs = load_target(args)
    if not specs:
        raise UsageError("the circuit contains no assert directives")
    reports = run_assertions(circuit, specs, args.shots, args.seed)
    summary = _circuit_summary(name, circuit)
    entries, lines = [], [_header(summary), f"shots {args.shots}, seed {args.seed}"]
    for r in reports:
        coeffs = None if r.estimated_sq_coeffs is None else [round(c, 12) for c in r.estimated_sq_coeffs]
        entries.append(
            {
                "family": r.family,
                "targets": list(r.targets),
                "histogram": {_digits_key(k): v for k, v in r.histogram.items()},
                "pass_rate": r.pass_rate,
                "estimated_sq_coeffs": coeffs,
                "passed": r.verdict(),
                "low_shots": r.low_shots,
            }
        )
        hist = ", ".join(f"{_digits_key(k)}: {v}" for k, v in r.histogram.items())
        status = "PASS" if r.verdict() else "FAIL"
        lines.append(f"[{status}] {r.description}")
        lines.append(f"  histogram {{{hist}}}  pass_rate {r.pass_rate:.6g}")
        if coeffs is not None:
            lines.append("  estimated |coeff|^2 " + ", ".join(f"{c:.6g}" for c in coeffs))
        if r.low_shots:
            lines.append(f"  warning: only {r.shots} shots; estimates are unreliable")
    payload = {"circuit": summary, "assertions": entries, "seed": args.seed, "shots": args.shots}
    _emit(args, payload, lines)
    return EXIT_OK if all(r.verdict() for r in reports) else EXIT_ASSERTION


def cmd_metrics(args) -> int:
    name, circuit, specs = load_target(args)
    summary = _circuit_summary(name, circuit)
    entries, lines = [], [_header(summary)]
    for spec in specs:
        m = assertion_metrics(spec)
        entry = {"family": spec.family, "targets": list(spec.targets), "cost": m.quantum_cost, "depth": m.depth}
        text = f"  {spec.describe()}: cost {m.quantum_cost}, depth {m.depth}"
        if len(spec.blocks()) > 1:
            entry["serial_depth"] = m.serial_depth
            text += f", serial depth {m.serial_depth}"
        entries.append(entry)
        lines.append(text)
    _emit(args, {"circuit": summary, "assertions": entries}, lines)
    return EXIT_OK


def cmd_oracle_check(args) -> int:
    name, circuit, _ = load_target(args)
    if circuit.num_qutrits > DENSE_MAX_QUTRITS:
        raise ResourceError(
            f"{circuit.num_qutrits} qutrits exceeds the dense-oracle limit of {DENSE_MAX_QUTRITS}"
        )
    fid = fidelity(simulate(circuit).final, oracle_state(circuit))
    ok = fid > 1 - ORACLE_TOLERANCE
    payload = {"circuit": _circuit_summary(name, circuit), "fidelity": fid, "match": ok}
    _emit(args, payload, [f"{name}: fidelity {fid:.12f} ({'match' if ok else 'MISMATCH'})"])
    return EXIT_OK if ok else EXIT_SIMULATION


def cmd_list_corpus(args) -> int:
    names = list(corpus.BUILDERS)
    _emit(args, {"corpus": {n: corpus.DESCRIPTIONS[n] for n in names}},
          [f"corpus:{n}  {corpus.DESCRIPTIONS[n]}" for n in names])
    return EXIT_OK


# -- argument parsing -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tritassert", description="Qutrit circuit simulator with dynamic assertions.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_text, *, source=True):
        p = sub.add_parser(name, help=help_text)
        if source:
            p.add_argument("source", help="a .t3 file or corpus:<name>")
            p.add_argument("--bug", action="store_true", help="use the corpus entry's buggy variant")
            p.add_argument("--input", metavar="TT", help="two input trits for a corpus entry, e.g. 01")
        p.add_argument("--json", action="store_true", help="machine-readable output")
        p.set_defaults(func=func)
        return p

    p = add("simulate", cmd_simulate, "print the final state (and slices)")
    p.add_argument("--slices", action="store_true", help="also print every named slice")
    p = add("assert", cmd_assert, "run the assertions over seeded shots")
    p.add_argument("--shots", type=int, default=1024)
    p.add_argument("--seed", type=int, default=0)
    add("metrics", cmd_metrics, "quantum cost and depth")
    add("oracle-check", cmd_oracle_check, "compare against the dense unitary oracle")
    add("list-corpus", cmd_list_corpus, "list the built-in circuits", source=False)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"error: {getattr(args, 'source', '')}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (UsageError, InputError, ResourceError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NumericalError as exc:
        print(f"simulation error: {exc}", file=sys.stderr)
        return EXIT_SIMULATION
    except Exception as exc:  # noqa: BLE001 - any other failure is an internal simulation error
        print(f"simulation error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_SIMULATION


if __name__ == "__main__":
    sys.exit(main())
