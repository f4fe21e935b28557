import json
import math
from json.decoder import JSONDecodeError

import numpy as np

from unitaryscaling.dynamics.bloch import (
    UnitaryScalingError,
    TRACE_TOL,
    BlochVector,
    build_basis,
    check_hermitian,
    vectorize,
)
from unitaryscaling.dynamics.lindblad import LindbladGenerator, Convention
from unitaryscaling.dynamics.channels import (
    KrausChannel,
    NmrParams,
    nmr_generator,
    bit_flip,
    phase_flip,
    depolarizing,
    amplitude_damping,
)

#a run configuration is one JSON document with the sections
# system, generator | channel, time_grid, initial_state, outputs,
# tolerances and logging. see docs/runconfig.md

DEFAULT_TOLERANCES = {
    "hermitian": 1e-10,
    "choi": 1e-8,
    "normality": 1e-8,
    "canonical": 1e-8,
    "entropy": 1e-8,
}

GALLERY_CHANNELS = {
    "bit_flip": bit_flip,
    "phase_flip": phase_flip,
    "depolarizing": depolarizing,
}

#alternative spelling of the reversed ordering
CONVENTION_ALIASES = {"paper": "reversed"}

_MISSING = object()

class ConfigError(UnitaryScalingError):
    pass

def decode_complex(value):
    """A number, or a [re, im] pair"""
    if isinstance(value, (list, tuple)):
        if len(value) != 2:
            raise ConfigError("complex entries are [re, im] pairs, got "
                + repr(value))
        return complex(float(value[0]), float(value[1]))
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError("matrix entry is not a number: " + repr(value))
    return complex(value)

def decode_complex_matrix(rows):
    try:
        matrix = np.array([[decode_complex(v) for v in row] for row in rows],
            dtype=complex)
    except ConfigError:
        raise
    except (TypeError, ValueError):
        raise ConfigError("matrix must be a list of equal length rows, got "
            + repr(rows))
    if matrix.ndim != 2:
        raise ConfigError("matrix rows have unequal lengths")
    return matrix

def encode_complex_matrix(matrix):
    return [[[float(v.real), float(v.imag)] for v in row]
        for row in np.asarray(matrix, dtype=complex)]

class RunConfig(object):
    def __init__(self, document, source="<memory>"):
        if not isinstance(document, dict):
            raise ConfigError(source + ": configuration must be a JSON "
                + "object")
        self.document = document
        self.source = source
        if ("generator" in document) == ("channel" in document):
            raise ConfigError(source + ": exactly one of 'generator' and "
                + "'channel' is required")
        self._basis = None
        #--tol, replaces every configured tolerance when set
        self.tolerance_override = None

    def get(self, section, key, fallback=_MISSING):
        value = self.document.get(section, {})
        if not isinstance(value, dict):
            raise ConfigError(self.source + ": section '" + section
                + "' must be an object")
        if key in value:
            return value[key]
        if fallback is _MISSING:
            raise ConfigError(self.source + ": missing '" + key
                + "' in section '" + section + "'")
        return fallback

    @property
    def is_channel(self):
        return "channel" in self.document

    @property
    def dim(self):
        d = self.get("system", "dimension", fallback=2)
        if isinstance(d, bool) or not isinstance(d, int) or d < 2:
            raise ConfigError(self.source + ": system dimension must be an "
                + "integer >= 2, got " + repr(d))
        return d

    def basis(self):
        if self._basis is None:
            basis_name = self.get("system", "basis", fallback="gell-mann")
            if basis_name != "gell-mann":
                raise ConfigError(self.source + ": unknown basis "
                    + repr(basis_name))
            self._basis = build_basis(self.dim)
        return self._basis

    def tolerance(self, name, override=None):
        if override is None:
            override = self.tolerance_override
        if override is not None:
            return override
        value = self.get("tolerances", name,
            fallback=DEFAULT_TOLERANCES[name])
        if not isinstance(value, (int, float)) or value <= 0:
            raise ConfigError(self.source + ": tolerance '" + name
                + "' must be a positive number")
        return float(value)

    def time_grid(self):
        values = self.get("time_grid", "values", fallback=None)
        if values is not None:
            times = np.array(values, dtype=float)
        else:
            start = float(self.get("time_grid", "start", fallback=0.0))
            stop = float(self.get("time_grid", "stop"))
            count = self.get("time_grid", "count")
            spacing = self.get("time_grid", "spacing", fallback="linear")
            if not isinstance(count, int) or count < 1:
                raise ConfigError(self.source + ": time grid count must be "
                    + "a positive integer")
            if spacing == "linear":
                times = np.linspace(start, stop, count)
            elif spacing == "log":
                if start <= 0:
                    raise ConfigError(self.source + ": log spaced time "
                        + "grids need start > 0")
                times = np.geomspace(start, stop, count)
            else:
                raise ConfigError(self.source + ": unknown spacing "
                    + repr(spacing))
        if times.ndim != 1 or len(times) == 0:
            raise ConfigError(self.source + ": time grid is empty")
        if np.any(times < 0) or not np.all(np.isfinite(times)):
            raise ConfigError(self.source + ": times must be finite and "
                + "non-negative")
        if np.any(np.diff(times) <= 0):
            raise ConfigError(self.source + ": time grid must be strictly "
                + "increasing")
        if self.is_channel and np.any(times != np.round(times)):
            raise ConfigError(self.source + ": channel time grids count "
                + "applications and must hold integers")
        return times

    def hermitian_matrix(self, rows):
        """Decoded matrix, Hermitian within the configured tolerance and
           returned exactly Hermitian"""
        matrix = decode_complex_matrix(rows)
        check_hermitian(matrix, self.tolerance("hermitian"))
        return 0.5 * (matrix + matrix.conj().T)

    def build_generator(self):
        section = self.document["generator"]
        if not isinstance(section, dict):
            raise ConfigError(self.source + ": 'generator' must be an object")
        model = section.get("model")
        try:
            if model == "nmr":
                if self.dim != 2:
                    raise ConfigError(self.source + ": the nmr model is a "
                        + "qubit model, dimension must be 2")
                return nmr_generator(NmrParams(
                    float(section.get("omega", 0.0)),
                    float(section.get("gamma_plus", 0.0)),
                    float(section.get("gamma_minus", 0.0)),
                    float(section.get("gamma_z", 0.0))))
            if model == "depolarizing":
                return isotropic_generator(self.basis(),
                    float(section["gamma"]))
            if model is not None:
                raise ConfigError(self.source + ": unknown generator model "
                    + repr(model))
            d = self.dim
            hamiltonian = (self.hermitian_matrix(section["hamiltonian"])
                if "hamiltonian" in section else np.zeros((d, d)))
            jumps = tuple(decode_complex_matrix(h)
                for h in section.get("jumps", []))
            convention = section.get("convention",
                section.get("gksl_convention", "standard"))
            convention = Convention(CONVENTION_ALIASES.get(convention,
                convention))
            gen = LindbladGenerator(hamiltonian, jumps, convention)
        except KeyError as e:
            raise ConfigError(self.source + ": generator is missing "
                + str(e))
        except (TypeError, ValueError) as e:
            if isinstance(e, ConfigError):
                raise
            raise ConfigError(self.source + ": invalid generator, "
                + str(e))
        if gen.dim != d:
            raise ConfigError(self.source + ": generator is "
                + str(gen.dim) + " dimensional but system dimension is "
                + str(d))
        return gen

    def build_channel(self):
        section = self.document["channel"]
        if not isinstance(section, dict):
            raise ConfigError(self.source + ": 'channel' must be an object")
        kind = section.get("type")
        try:
            if kind in GALLERY_CHANNELS or kind == "amplitude_damping":
                if self.dim != 2:
                    raise ConfigError(self.source + ": gallery channels act "
                        + "on qubits, dimension must be 2")
                p = float(section["p"])
                if kind == "amplitude_damping":
                    return amplitude_damping(p, self.basis())[0]
                return GALLERY_CHANNELS[kind](p)[0]
            if kind is not None:
                raise ConfigError(self.source + ": unknown channel type "
                    + repr(kind))
            return KrausChannel(self.dim, [decode_complex_matrix(k)
                for k in section["kraus"]])
        except KeyError as e:
            raise ConfigError(self.source + ": channel is missing " + str(e))
        except (TypeError, ValueError) as e:
            if isinstance(e, ConfigError):
                raise
            raise ConfigError(self.source + ": invalid channel, " + str(e))

    def initial_bloch(self):
        """Bloch vector of the trace one initial state"""
        section = self.document.get("initial_state", {"bloch": None})
        basis = self.basis()
        try:
            if "bloch" in section:
                coords = section["bloch"]
                if coords is None:
                    coords = np.zeros(basis.size)
                x = BlochVector(basis.dim, coords)
            elif "matrix" in section:
                decomp = vectorize(self.hermitian_matrix(section["matrix"]),
                    basis)
                if abs(decomp.trace - 1) > TRACE_TOL:
                    raise ConfigError(self.source + ": initial state must "
                        + "have unit trace, got " + repr(decomp.trace))
                x = decomp.bloch
            elif "ket" in section:
                ket = np.array([decode_complex(v) for v in section["ket"]])
                norm = np.linalg.norm(ket)
                if norm == 0:
                    raise ConfigError(self.source + ": initial ket is zero")
                ket = ket / norm
                x = vectorize(np.outer(ket, ket.conj()), basis).bloch
            else:
                raise ConfigError(self.source + ": initial_state needs one "
                    + "of 'bloch', 'matrix' or 'ket'")
        except (TypeError, ValueError) as e:
            if isinstance(e, ConfigError):
                raise
            raise ConfigError(self.source + ": invalid initial state, "
                + str(e))
        if not x.is_in_ball():
            raise ConfigError(self.source + ": initial Bloch vector lies "
                + "outside the ball of states")
        return x

def isotropic_generator(basis, gamma):
    """
    Depolarizing generator with the jumps sqrt(2 gamma/d) f_a over every
    traceless basis element, its superoperator matrix is -gamma I. For
    qubits the jumps are sqrt(gamma/2) times the Pauli matrices.
    """
    if not gamma >= 0:
        raise ValueError("depolarizing rate must be non-negative, got "
            + repr(gamma))
    d = basis.dim
    scale = math.sqrt(2 * gamma / d)
    return LindbladGenerator(np.zeros((d, d)),
        tuple(scale * f for f in basis.traceless))

def load_config(path):
    try:
        with open(path) as fd:
            document = json.load(fd)
    except OSError as e:
        raise ConfigError("cannot read configuration file " + str(path)
            + ": " + str(e))
    except JSONDecodeError as e:
        raise ConfigError(str(path) + " is not valid JSON: " + str(e))
    return RunConfig(document, source=str(path))
