"""Command-line front-end.

Verbs: ``lineshape-fit``, ``g2``, ``hom``, ``visibility``, ``stark``,
``table``, ``synth``.  Exit codes: 0 success, 1 IO/parse error,
2 numerical failure.  All plot output is data-only (CSV, or SVG line
plots via ``--svg``); nothing is written outside the paths given on the
command line.
"""

from __future__ import annotations

import argparse
import json
import sys
from itertools import combinations_with_replacement

import numpy as np

from . import correlation as corr
from . import lineshape as ls
from . import synthdata
from . import visibility as vis
from .config import load_experiment_config
from .errors import HomsimError
from .fitting import fit_g2_auto, fit_lineshape
from .stark import energy_at_field, tune_pair

EXIT_OK = 0
EXIT_IO = 1
EXIT_NUMERICAL = 2


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except HomsimError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (OSError, ValueError, KeyError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="homsim",
        description="Two-photon interference toolkit for remote tunable emitters",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("lineshape-fit", help="fit a spectrum CSV with a line profile")
    p.add_argument("spectrum_csv", help="CSV with header energy_ueV,intensity")
    p.add_argument("--kind", choices=[k.value for k in ls.LineshapeKind],
                   default="lorentzian")
    p.add_argument("--weights", choices=["poisson"], default=None,
                   help="weight residuals by sqrt(count) for counting data")
    p.add_argument("--residuals-out", default=None,
                   help="write energy_ueV,residual CSV here")
    p.set_defaults(handler=cmd_lineshape_fit)

    p = sub.add_parser("g2", help="autocorrelation trace of one emitter")
    p.add_argument("--config", required=True)
    p.add_argument("--emitter", required=True)
    _add_ideal_convolved(p)
    p.add_argument("--out", required=True, help="trace CSV output path")
    p.add_argument("--svg", default=None, help="optional SVG line plot")
    p.set_defaults(handler=cmd_g2)

    p = sub.add_parser("hom", help="two-source cross-correlation trace")
    p.add_argument("--config", required=True)
    p.add_argument("--emitter-a", required=True)
    p.add_argument("--emitter-b", required=True)
    p.add_argument("--detuning", type=float, default=0.0, metavar="UEV")
    p.add_argument("--polarization", choices=["parallel", "orthogonal"], default=None,
                   help="override the beamsplitter polarisation from the config")
    _add_ideal_convolved(p)
    p.add_argument("--out", required=True)
    p.add_argument("--svg", default=None)
    p.set_defaults(handler=cmd_hom)

    p = sub.add_parser("visibility",
                       help="post-selected interference visibility")
    p.add_argument("--config", required=True)
    p.add_argument("--emitter-a", required=True)
    p.add_argument("--emitter-b", required=True)
    group = p.add_mutually_exclusive_group()
    group.add_argument("--at", type=float, default=None, metavar="UEV",
                       help="single detuning; prints convolved and ideal visibility")
    group.add_argument("--sweep", default=None, metavar="LO:HI:STEP",
                       help="detuning sweep range in ueV (default from config)")
    p.add_argument("--out", default=None, help="sweep curve CSV output path")
    p.add_argument("--svg", default=None)
    p.set_defaults(handler=cmd_visibility)

    p = sub.add_parser("stark", help="field/energy solver for one emitter")
    p.add_argument("--config", required=True)
    p.add_argument("--emitter", required=True)
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--target", type=float, default=None, metavar="UEV",
                       help="solve for the field reaching this energy")
    group.add_argument("--field", type=float, default=None, metavar="KVCM",
                       help="evaluate the energy at this field")
    p.set_defaults(handler=cmd_stark)

    p = sub.add_parser("table", help="per-pair interference summary")
    p.add_argument("--config", required=True)
    p.add_argument("--out", default=None, help="optional CSV output path")
    p.set_defaults(handler=cmd_table)

    p = sub.add_parser("synth", help="generate synthetic fixture files")
    synth_sub = p.add_subparsers(dest="what", required=True)

    ps = synth_sub.add_parser("coincidences",
                              help="Monte Carlo autocorrelation histogram")
    ps.add_argument("--config", required=True)
    ps.add_argument("--emitter", required=True)
    ps.add_argument("--events", type=int, default=100000)
    ps.add_argument("--seed", type=int, default=0)
    ps.add_argument("--window", type=float, default=8000.0, metavar="PS")
    ps.add_argument("--bin-width", type=float, default=40.0, metavar="PS")
    ps.add_argument("--expected", action="store_true",
                    help="write deterministic expected counts instead of draws")
    ps.add_argument("--out", required=True)
    ps.set_defaults(handler=cmd_synth_coincidences)

    ps = synth_sub.add_parser("spectrum", help="noisy model spectrum")
    ps.add_argument("--kind", choices=[k.value for k in ls.LineshapeKind],
                    default="voigt")
    ps.add_argument("--center", type=float, default=0.0, metavar="UEV")
    ps.add_argument("--lorentzian-fwhm", type=float, default=0.0, metavar="UEV")
    ps.add_argument("--gaussian-fwhm", type=float, default=0.0, metavar="UEV")
    ps.add_argument("--amplitude", type=float, default=1.0)
    ps.add_argument("--offset", type=float, default=0.0)
    ps.add_argument("--points", type=int, default=200)
    ps.add_argument("--span", type=float, default=60.0, metavar="UEV")
    ps.add_argument("--noise-pct", type=float, default=0.0)
    ps.add_argument("--seed", type=int, default=0)
    ps.add_argument("--out", required=True)
    ps.set_defaults(handler=cmd_synth_spectrum)

    return parser


def _add_ideal_convolved(p):
    group = p.add_mutually_exclusive_group()
    group.add_argument("--ideal", action="store_true",
                       help="skip the detector-response convolution")
    group.add_argument("--convolved", action="store_true",
                       help="apply the detector response (default)")


def cmd_lineshape_fit(args) -> int:
    spectrum = ls.read_spectrum_csv(args.spectrum_csv)
    result = fit_lineshape(spectrum, args.kind, weights=args.weights)
    print(f"lineshape fit ({args.kind}) of {args.spectrum_csv}:")
    print(result.report())
    if args.residuals_out:
        ls._write_two_column_csv(args.residuals_out, ("energy_ueV", "residual"),
                                 spectrum.energies_ueV, result.residuals)
        print(f"residuals written to {args.residuals_out}")
    return EXIT_OK


def cmd_g2(args) -> int:
    cfg = load_experiment_config(args.config)
    src = cfg.emitter(args.emitter).model
    taus = cfg.grid.taus()
    if args.ideal:
        trace = corr.CorrelationTrace(
            taus, np.maximum(corr.g2_auto_ideal(taus, src), 0.0))
    else:
        trace = corr.g2_auto_measured(src, cfg.detector, taus)
    corr.write_trace_csv(args.out, trace)
    print(f"g2 trace for {args.emitter} "
          f"({'ideal' if args.ideal else 'convolved'}) written to {args.out}")
    if args.svg:
        _write_line_svg(args.svg, trace.taus_ps, trace.values,
                        "delay (ps)", "g2")
    return EXIT_OK


def cmd_hom(args) -> int:
    cfg = load_experiment_config(args.config)
    src_a = cfg.emitter(args.emitter_a).model
    src_b = cfg.emitter(args.emitter_b).model
    splitter = cfg.beamsplitter
    if args.polarization is not None:
        from dataclasses import replace

        splitter = replace(splitter, polarization=args.polarization)
    taus = cfg.grid.taus()
    if args.ideal:
        vals = corr.g2_cross_ideal(taus, src_a, src_b, splitter, args.detuning)
        trace = corr.CorrelationTrace(taus, np.maximum(vals, 0.0))
    else:
        trace = corr.g2_cross_measured(src_a, src_b, splitter, args.detuning,
                                       cfg.detector, taus)
    corr.write_trace_csv(args.out, trace)
    print(f"HOM trace {args.emitter_a}+{args.emitter_b} "
          f"({splitter.polarization.value}, dE={args.detuning} ueV) written to {args.out}")
    if args.svg:
        _write_line_svg(args.svg, trace.taus_ps, trace.values, "delay (ps)", "g2")
    return EXIT_OK


def cmd_visibility(args) -> int:
    cfg = load_experiment_config(args.config)
    src_a = cfg.emitter(args.emitter_a).model
    src_b = cfg.emitter(args.emitter_b).model
    taus = cfg.grid.taus()

    if args.at is not None:
        v_conv = vis.postselected_visibility(
            src_a, src_b, cfg.beamsplitter, args.at, cfg.detector,
            convolved=True, taus_ps=taus)
        v_ideal = vis.postselected_visibility(
            src_a, src_b, cfg.beamsplitter, args.at, cfg.detector,
            convolved=False, taus_ps=taus)
        print(f"visibility at dE={args.at} ueV: "
              f"convolved={v_conv:.4f} ideal={v_ideal:.4f}")
        return EXIT_OK

    if args.sweep is not None:
        lo, hi, step = (float(tok) for tok in args.sweep.split(":"))
        n = int(round((hi - lo) / step))
        detunings = lo + step * np.arange(n + 1)
    else:
        detunings = cfg.sweep.detunings()
    curve = vis.detuning_sweep(src_a, src_b, cfg.beamsplitter, cfg.detector,
                               detunings, taus_ps=taus)
    fwhm = vis.curve_fwhm(curve)
    peak = float(np.max(curve.visibilities))
    print(f"visibility sweep {args.emitter_a}+{args.emitter_b}: "
          f"peak={peak:.4f}, Lorentzian-fit FWHM={fwhm:.3f} ueV")
    if args.out:
        vis.write_visibility_csv(args.out, curve)
        print(f"curve written to {args.out}")
    if args.svg:
        _write_line_svg(args.svg, curve.detunings_ueV, curve.visibilities,
                        "detuning (ueV)", "visibility")
    return EXIT_OK


def cmd_stark(args) -> int:
    cfg = load_experiment_config(args.config)
    entry = cfg.emitter(args.emitter)
    if entry.stark is None:
        raise ValueError(f"emitter {args.emitter!r} has no Stark parameters")
    if args.field is not None:
        energy = energy_at_field(entry.stark, args.field)
        print(f"{args.emitter}: E({args.field} kV/cm) = {energy:.6g} ueV")
    else:
        result = tune_pair(args.target, entry.stark)
        print(f"{args.emitter}: target {args.target:.6g} ueV reached at "
              f"F = {result.field_kvcm:.6g} kV/cm "
              f"(residual {result.residual_ueV:.3g} ueV)")
    return EXIT_OK


def cmd_table(args) -> int:
    cfg = load_experiment_config(args.config)
    names = sorted(cfg.emitters)
    header = ("pair", "overlap", "g2_0_a", "g2_0_b", "v_ideal", "v_convolved")
    rows = []
    for name_a, name_b in combinations_with_replacement(names, 2):
        src_a = cfg.emitter(name_a).model
        src_b = cfg.emitter(name_b).model
        v_ideal = vis.postselected_visibility(
            src_a, src_b, cfg.beamsplitter, 0.0, cfg.detector,
            convolved=False, taus_ps=cfg.grid.taus())
        v_conv = vis.postselected_visibility(
            src_a, src_b, cfg.beamsplitter, 0.0, cfg.detector,
            convolved=True, taus_ps=cfg.grid.taus())
        rows.append((f"{name_a}+{name_b}", cfg.beamsplitter.overlap,
                     src_a.background, src_b.background, v_ideal, v_conv))

    widths = [max(len(header[i]), *(len(_fmt(r[i])) for r in rows))
              for i in range(len(header))]
    print("  ".join(h.ljust(w) for h, w in zip(header, widths)))
    for row in rows:
        print("  ".join(_fmt(v).ljust(w) for v, w in zip(row, widths)))

    if args.out:
        lines = [",".join(header)]
        lines += [",".join(_fmt(v) for v in row) for row in rows]
        with open(args.out, "w") as fh:
            fh.write("\n".join(lines) + "\n")
        print(f"table written to {args.out}")
    return EXIT_OK


def _fmt(value) -> str:
    return f"{value:.4f}" if isinstance(value, float) else str(value)


def cmd_synth_coincidences(args) -> int:
    cfg = load_experiment_config(args.config)
    src = cfg.emitter(args.emitter).model
    taus = cfg.grid.taus()
    ideal = corr.CorrelationTrace(
        taus, np.maximum(corr.g2_auto_ideal(taus, src), 0.0))
    synth_cfg = synthdata.SynthConfig(
        seed=args.seed, n_events=args.events, window_ps=args.window,
        bin_width_ps=args.bin_width,
        noise_model="none" if args.expected else "poisson")
    hist = synthdata.sample_coincidences(ideal, cfg.detector, synth_cfg)
    corr.write_trace_csv(args.out, hist)
    print(f"coincidence histogram ({args.events} events, seed {args.seed}) "
          f"written to {args.out}")
    return EXIT_OK


def cmd_synth_spectrum(args) -> int:
    params = ls.LineshapeParams(
        kind=args.kind, center_ueV=args.center,
        lorentzian_fwhm_ueV=args.lorentzian_fwhm,
        gaussian_fwhm_ueV=args.gaussian_fwhm,
        amplitude=args.amplitude, offset=args.offset)
    spectrum = synthdata.make_spectrum(params, args.points, args.span,
                                       args.noise_pct, args.seed)
    ls.write_spectrum_csv(args.out, spectrum)
    print(f"spectrum ({args.kind}, seed {args.seed}) written to {args.out}")
    return EXIT_OK


def _write_line_svg(path, x, y, xlabel, ylabel) -> None:
    # imported lazily: plotting is optional and matplotlib import is slow
    from matplotlib.backends.backend_svg import FigureCanvasSVG
    from matplotlib.figure import Figure

    fig = Figure(figsize=(6.0, 4.0))
    FigureCanvasSVG(fig)
    ax = fig.add_subplot(111)
    ax.plot(x, y, lw=1.0)
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    fig.tight_layout()
    fig.savefig(path, format="svg")
    print(f"plot written to {path}")


if __name__ == "__main__":
    raise SystemExit(main())
