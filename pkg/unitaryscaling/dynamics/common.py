import os
import sys
import csv
import io
import json
import math
import logging
import tempfile
import traceback
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from unitaryscaling.dynamics.bloch import (
    state_from_bloch,
    vectorize,
    is_physical_state,
    HermitianDecomp,
)
from unitaryscaling.dynamics.lindblad import (
    superop_matrix,
    is_unital,
    is_completely_positive_semigroup,
    is_completely_positive_map,
    is_normal_superop,
    commutant_dimension,
    kernel_dimension,
)
from unitaryscaling.dynamics.evolution import (
    NumericalError,
    dynamical_matrix,
    evolve,
    evolve_trace,
    semigroup_defect,
    is_contractive,
)
from unitaryscaling.dynamics.decomposition import (
    NormalityError,
    OrientationError,
    polar,
    canonical_form,
    classify_isotropy,
    spheroid_class,
    generator_canonical_form,
    fit_rates,
)
from unitaryscaling.dynamics.entropy import (
    linear_entropy_from_bloch,
    predicted_linear_entropy,
    subspace_weights,
    von_neumann_entropy,
)
from unitaryscaling.dynamics.channels import affine_matrix
from unitaryscaling.dynamics.runconfig import ConfigError, load_config
from unitaryscaling.linalg import normality_defect

VERSION_NUMBER = "0.1.0"

def _matrix(a):
    return [[_number(v) for v in row] for row in np.asarray(a)]

def _number(v):
    """JSON has no inf or nan, non-finite values are reported as null"""
    v = float(v)
    return v if math.isfinite(v) else None

def _dynamical_matrices(config, times, threads):
    if config.is_channel:
        step = affine_matrix(config.build_channel(), config.basis())
        return [step.power(int(k)).to_dynamical(float(k)) for k in times]
    sup = superop_matrix(config.build_generator(), config.basis())
    if threads <= 1:
        return [dynamical_matrix(sup, t) for t in times]
    with ThreadPoolExecutor(max_workers=threads) as executor:
        return list(executor.map(lambda t: dynamical_matrix(sup, t), times))

def _trajectory(config, threads):
    times = config.time_grid()
    x0 = config.initial_bloch()
    if config.is_channel:
        states = [evolve(dm, x0) for dm in _dynamical_matrices(config,
            times, threads)]
    else:
        sup = superop_matrix(config.build_generator(), config.basis())
        states = evolve_trace(sup, x0, times, threads)
    return times, x0, states

def cmd_evolve(config, tol=None, threads=1):
    """Bloch coordinates, purity and linear entropy over the time grid"""
    times, x0, states = _trajectory(config, threads)
    d = config.dim
    header = (["t"] + ["x_" + str(i + 1) for i in range(x0.coords.size)]
        + ["purity", "S_L"])
    rows = []
    for t, x in zip(times, states):
        rows.append([t] + list(x.coords) + [1 / d + x.norm_squared(),
            linear_entropy_from_bloch(x)])
    return header, rows

def _entropy_predictor(config, x0, tol):
    """Closed form linear entropy as a function of time, or None when the
       dynamics is not normal and unital"""
    logger = logging.getLogger('UNITARYSCALING')
    d = config.dim
    try:
        if config.is_channel:
            step = affine_matrix(config.build_channel(), config.basis())
            if np.linalg.norm(step.translation) >= tol:
                logger.warning("channel is not unital, no closed form "
                    + "entropy prediction")
                return None
            cf = canonical_form(polar(step.linear_part), tol)
            if any(math.isinf(l) for l in cf.lams):
                logger.warning("channel annihilates a subspace, no closed "
                    + "form entropy prediction")
                return None
            conjugation, sizes, rates = cf.conjugation, cf.sizes, cf.lams
        else:
            sup = superop_matrix(config.build_generator(), config.basis())
            if not sup.is_unital(tol):
                logger.warning("generator is not unital, no closed form "
                    + "entropy prediction")
                return None
            form = generator_canonical_form(sup, tol)
            conjugation, sizes, rates = (form.conjugation, form.sizes,
                form.gammas)
    except (NormalityError, OrientationError) as e:
        logger.warning("no closed form entropy prediction, " + str(e))
        return None
    #rounding leaves zero rates at -1e-16 or so
    rates = [max(r, 0.0) if r > -tol else r for r in rates]
    weights = subspace_weights(x0, conjugation, sizes)
    return lambda t: predicted_linear_entropy(weights, rates, d, t)

def cmd_entropy(config, tol=None, threads=1):
    times, x0, states = _trajectory(config, threads)
    basis = config.basis()
    predictor = _entropy_predictor(config, x0, config.tolerance("canonical",
        tol))
    entropy_tol = config.tolerance("entropy", tol)
    header = ["t", "S_L_direct", "S_L_predicted", "S_vN", "abs_err"]
    rows = []
    for t, x in zip(times, states):
        direct = linear_entropy_from_bloch(x)
        predicted = predictor(t) if predictor is not None else math.nan
        if abs(direct - predicted) > entropy_tol:
            logging.getLogger('UNITARYSCALING').warning("closed form "
                + "linear entropy differs from direct evolution at t="
                + repr(float(t)) + " by " + repr(abs(direct - predicted)))
        rows.append([t, direct, predicted,
            von_neumann_entropy(state_from_bloch(x, basis)),
            abs(direct - predicted)])
    return header, rows

def _polar_report(parts):
    return {
        "rotation": _matrix(parts.rotation),
        "scaling": _matrix(parts.scaling),
        "commute_defect": _number(parts.commute_defect),
        "orientation": parts.orientation,
        "singular": parts.singular,
    }

def _error_report(e):
    report = {"type": type(e).__name__, "message": str(e)}
    if isinstance(e, NormalityError):
        report["defect"] = _number(e.defect)
    return {"error": report}

def _canonical_report(parts, d, tol):
    try:
        cf = canonical_form(parts, tol)
    except (NormalityError, OrientationError) as e:
        return _error_report(e)
    report = {
        "blocks": [{"theta": _number(b.theta), "lambda": _number(b.lam),
            "size": b.size} for b in cf.blocks],
        "conjugation": _matrix(cf.conjugation),
        "isotropy": classify_isotropy(cf, tol).value,
    }
    if d == 2:
        report["spheroid"] = spheroid_class(cf).value
    return report

def cmd_decompose(config, tol=None, threads=1):
    tol = config.tolerance("canonical", tol)
    d = config.dim
    times = config.time_grid()
    report = {"dimension": d, "version": VERSION_NUMBER}
    if config.is_channel:
        step = affine_matrix(config.build_channel(), config.basis())
        report["kind"] = "channel"
        report["normality_defect"] = _number(normality_defect(
            step.linear_part))
        report["translation"] = [_number(v) for v in step.translation]
        samples = [(1.0, step.linear_part)]
        report["fitted"] = None
    else:
        sup = superop_matrix(config.build_generator(), config.basis())
        report["kind"] = "generator"
        report["normality_defect"] = _number(normality_defect(sup.lam))
        report["translation_generator"] = [_number(v) for v in sup.ell]
        samples = [(dm.t, dm.matrix) for dm in _dynamical_matrices(config,
            times, threads)]
        positive = [t for t in times if t > 0]
        if not positive:
            report["fitted"] = None
        else:
            try:
                fit = fit_rates(sup, positive, tol)
                report["fitted"] = {
                    "gammas": [_number(g) for g in fit.gammas],
                    "omegas": [_number(w) for w in fit.omegas],
                    "sizes": list(fit.sizes),
                    "residual": _number(fit.residual),
                }
            except NormalityError as e:
                report["fitted"] = _error_report(e)
    decompositions = []
    for t, m in samples:
        parts = polar(m)
        decompositions.append({
            "t": _number(t),
            "polar": _polar_report(parts),
            "canonical": _canonical_report(parts, d, tol),
        })
    report["decompositions"] = decompositions
    return report

def probe_states(d):
    """Basis states and their pairwise real and imaginary superpositions"""
    kets = [np.eye(d)[j] for j in range(d)]
    for j in range(d):
        for k in range(j + 1, d):
            for phase in (1, -1, 1j, -1j):
                ket = np.zeros(d, dtype=complex)
                ket[j] = 1
                ket[k] = phase
                kets.append(ket / math.sqrt(2))
    return [np.outer(ket, np.conj(ket)) for ket in kets]

def _condition(passed, **measures):
    report = {"passed": bool(passed)}
    for key, value in measures.items():
        report[key] = _number(value) if isinstance(value, float) else value
    return report

def cmd_verify(config, tol=None, threads=1):
    d = config.dim
    basis = config.basis()
    times = config.time_grid()
    choi_tol = config.tolerance("choi", tol)
    normality_tol = config.tolerance("normality", tol)
    dms = _dynamical_matrices(config, times, threads)
    probes = [vectorize(rho, basis).bloch for rho in probe_states(d)]
    min_eigenvalue = math.inf
    for dm in dms:
        for x in probes:
            _, eigenvalue = is_physical_state(HermitianDecomp(1.0,
                evolve(dm, x)), basis)
            min_eigenvalue = min(min_eigenvalue, eigenvalue)
    largest = max(is_contractive(dm)[1] for dm in dms)
    conditions = {
        "positivity": _condition(min_eigenvalue >= -1e-10,
            min_eigenvalue=min_eigenvalue),
        "contractivity": _condition(largest <= 1 + choi_tol,
            max_singular_value=largest),
    }
    if config.is_channel:
        channel = config.build_channel()
        step = affine_matrix(channel, basis)
        translation = float(np.linalg.norm(step.translation))
        conditions["unitality"] = _condition(translation < 1e-10,
            translation_norm=translation)
        passed, choi_min = is_completely_positive_map(channel.apply, d,
            choi_tol)
        conditions["complete_positivity"] = _condition(passed,
            min_choi_eigenvalue=choi_min)
        defect = normality_defect(step.linear_part)
        conditions["normality"] = _condition(defect < normality_tol,
            defect=defect)
        conditions["semigroup"] = "not_applicable"
        conditions["spohn"] = "not_applicable"
    else:
        gen = config.build_generator()
        sup = superop_matrix(gen, basis)
        conditions["unitality"] = _condition(is_unital(gen),
            translation_norm=float(np.linalg.norm(sup.ell)))
        choi_min = math.inf
        for t in times:
            choi_min = min(choi_min, is_completely_positive_semigroup(gen,
                t, choi_tol)[1])
        conditions["complete_positivity"] = _condition(choi_min >= -choi_tol,
            min_choi_eigenvalue=choi_min)
        semigroup = max([semigroup_defect(sup, a, b)
            for a, b in zip(times, times[1:])] or [0.0])
        conditions["semigroup"] = _condition(semigroup < 1e-8,
            defect=semigroup)
        passed, defect = is_normal_superop(sup, normality_tol)
        conditions["normality"] = _condition(passed, defect=defect)
        commutant = commutant_dimension(gen.adjoint_closed_operators())
        kernel = kernel_dimension(gen)
        #a trivial commutant forces a unique stationary state
        conditions["spohn"] = _condition(commutant != 1 or kernel == 1,
            commutant_dimension=commutant, kernel_dimension=kernel,
            unique_steady_state=kernel == 1)
    return {"dimension": d, "kind": "channel" if config.is_channel else
        "generator", "version": VERSION_NUMBER, "conditions": conditions}

COMMANDS = {
    "evolve": (cmd_evolve, "csv"),
    "entropy": (cmd_entropy, "csv"),
    "decompose": (cmd_decompose, "json"),
    "verify": (cmd_verify, "json"),
}

def format_table(header, rows, fmt):
    if fmt == "json":
        return json.dumps({"columns": header, "rows": [[_number(v)
            for v in row] for row in rows]}, sort_keys=True, indent=2) + "\n"
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        #repr gives the shortest string that reads back to the same float
        writer.writerow([repr(float(v)) for v in row])
    return out.getvalue()

def format_output(result, fmt):
    if isinstance(result, tuple):
        return format_table(result[0], result[1], fmt)
    if fmt != "json":
        raise ConfigError("this command writes json reports only")
    return json.dumps(result, sort_keys=True, indent=2, allow_nan=False) \
        + "\n"

def parse_args(argv=None):
    from argparse import ArgumentParser

    parser = ArgumentParser(description='Unitary and scaling decomposition'
        + ' of Lindblad dynamics and quantum channels')
    parser.add_argument('command', choices=sorted(COMMANDS),
                        help='what to compute')
    parser.add_argument("--config", action="store", required=True,
        help="JSON run configuration (mandatory)")
    parser.add_argument("--out", action="store", default=None,
        help="Output file, standard output when absent")
    parser.add_argument("--format", action="store", choices=["csv", "json"],
        default=None, help="Output format, csv for evolve and entropy and "
        + "json for decompose and verify by default")
    parser.add_argument("--tol", action="store", type=float, default=None,
        help="Override the numerical tolerances of the configuration")
    parser.add_argument("--threads", action="store", type=int, default=1,
        help="Worker threads for time grid evaluation")
    parser.add_argument("-v", "--version", action="version", version=
        "%(prog)s " + VERSION_NUMBER)
    return parser.parse_args(argv)

def logger_config(logger, config):
    formatter = logging.Formatter(config.get("logging", "log_format",
        fallback="%(levelname)s:%(asctime)s: %(message)s"))
    logstream = logging.StreamHandler()
    logstream.setFormatter(formatter)
    logstream.setLevel(config.get("logging", "log_level_stdout", fallback=
        "INFO"))
    logger.addHandler(logstream)
    filename = config.get("logging", "log_file_location", fallback="")
    if len(filename.strip()) == 0:
        filename = tempfile.gettempdir() + "/unitaryscaling.log"
    logfile = logging.FileHandler(filename, mode=('a' if
        config.get("logging", "append_log", fallback=False) else 'w'))
    logfile.setFormatter(formatter)
    logfile.setLevel(logging.DEBUG)
    logger.addHandler(logfile)
    logger.setLevel(logging.DEBUG)
    return logger, filename

# returns non-zero status code on failure
def main(argv=None):
    try:
        opts = parse_args(argv)
    except SystemExit as e:
        #bad arguments are exit status 1
        return 0 if e.code in (0, None) else 1

    try:
        config = load_config(opts.config)
    except ConfigError as e:
        print("ERROR: " + str(e), file=sys.stderr)
        return 1
    config.tolerance_override = opts.tol
    logger = logging.getLogger('UNITARYSCALING')
    logger, logfilename = logger_config(logger, config)
    logger.info('Starting unitary-scaling ' + VERSION_NUMBER + ' '
        + opts.command)
    logger.info('Logging to ' + logfilename)
    logger.debug("Process ID (PID) = " + str(os.getpid()))
    if opts.threads < 1:
        logger.error("--threads must be at least 1")
        return 1
    command, default_format = COMMANDS[opts.command]
    fmt = opts.format or config.get("outputs", "format",
        fallback=default_format)
    if fmt not in ("csv", "json"):
        logger.error("Unknown output format " + repr(fmt))
        return 1
    try:
        output = format_output(command(config, opts.tol, opts.threads), fmt)
    except (NumericalError, np.linalg.LinAlgError) as e:
        logger.error("Numerical failure: " + str(e))
        logger.debug("traceback = " + str(traceback.format_exc()))
        return 2
    except ValueError as e:
        logger.error("Invalid configuration: " + str(e))
        logger.debug("traceback = " + str(traceback.format_exc()))
        return 1
    out_path = opts.out or config.get("outputs", "path", fallback=None)
    if out_path is None:
        sys.stdout.write(output)
    else:
        with open(out_path, "w") as fd:
            fd.write(output)
        logger.info("Wrote " + opts.command + " output to " + out_path)
    return 0
