"""Channel models, validation, serialization, and link capacities.

The discrete model carries three conditional tables indexed as
``table[input, state, output]``; each ``[input, state, :]`` slice is a pmf
over the output alphabet. Multihop example families represent the
relay-destination link as an ideal bit pipe of rate ``r1`` (a scalar, not a
degenerate table), matching how those links behave: error-free at a fixed
rate. Model values are immutable after construction and all operations here
are pure.
"""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass
from typing import Any

import numpy as np

from .errors import SolverError, UsageError, ValidationError
from .info import PROB_TOL, Pmf

__all__ = [
    "DiscreteOrcd",
    "ParallelBinaryMrcd",
    "BinaryMrcd",
    "GaussianMrcd",
    "LinkCapacities",
    "channel_capacity",
    "link_capacities",
    "reduce_to_mrcd",
    "embed_parallel_binary",
    "embed_binary",
    "as_discrete",
    "model_from_dict",
    "model_to_dict",
    "load_model",
    "dump_model",
]


def _validate_channel(name: str, table, n_z: int) -> np.ndarray:
    arr = np.asarray(table, dtype=float)
    if arr.ndim != 3:
        raise ValidationError(
            f"{name}: expected shape (input, state, output), got {arr.shape}"
        )
    if arr.shape[1] != n_z:
        raise ValidationError(
            f"{name}: state axis has size {arr.shape[1]}, expected {n_z}"
        )
    if not np.all(np.isfinite(arr)):
        raise ValidationError(f"{name}: entries must be finite")
    if float(arr.min()) < -PROB_TOL:
        bad = np.unravel_index(int(arr.argmin()), arr.shape)
        raise ValidationError(f"{name}[{bad[0]}][{bad[1]}]: negative entry")
    arr = np.clip(arr, 0.0, None)
    sums = arr.sum(axis=2)
    off = np.abs(sums - 1.0) > PROB_TOL
    if off.any():
        i, z = map(int, np.argwhere(off)[0])
        raise ValidationError(
            f"{name}[{i}][{z}]: conditional slice sums to {sums[i, z]}"
        )
    arr = arr / sums[:, :, None]
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True, eq=False)
class DiscreteOrcd:
    """Discrete state-dependent orthogonal relay channel.

    ``chan_sr`` is p(y_R | x1, z), ``chan_rd`` is p(y1 | x_R, z) and
    ``chan_sd`` is p(y2 | x2, z), all indexed ``[input, state, output]``.
    When ``r1_pipe`` is set, the relay-destination link is an ideal bit pipe
    of that rate and ``chan_rd`` is ignored by capacity computations.
    """

    p_z: Pmf
    chan_sr: np.ndarray
    chan_rd: np.ndarray
    chan_sd: np.ndarray
    r1_pipe: float | None = None

    def __post_init__(self):
        p_z = self.p_z if isinstance(self.p_z, Pmf) else Pmf(self.p_z)
        n_z = len(p_z)
        object.__setattr__(self, "p_z", p_z)
        object.__setattr__(self, "chan_sr", _validate_channel("chan_sr", self.chan_sr, n_z))
        object.__setattr__(self, "chan_rd", _validate_channel("chan_rd", self.chan_rd, n_z))
        object.__setattr__(self, "chan_sd", _validate_channel("chan_sd", self.chan_sd, n_z))
        if self.r1_pipe is not None:
            r1 = float(self.r1_pipe)
            if not (np.isfinite(r1) and r1 >= 0.0):
                raise ValidationError(f"r1_pipe: must be a finite rate >= 0, got {r1}")
            object.__setattr__(self, "r1_pipe", r1)

    @property
    def n_x1(self) -> int:
        return int(self.chan_sr.shape[0])

    @property
    def n_yr(self) -> int:
        return int(self.chan_sr.shape[2])

    @property
    def n_xr(self) -> int:
        return int(self.chan_rd.shape[0])

    @property
    def n_y1(self) -> int:
        return int(self.chan_rd.shape[2])

    @property
    def n_x2(self) -> int:
        return int(self.chan_sd.shape[0])

    @property
    def n_y2(self) -> int:
        return int(self.chan_sd.shape[2])

    @property
    def n_z(self) -> int:
        return len(self.p_z)


def _check_unit_interval(name: str, value: float, lo: float, hi: float) -> float:
    value = float(value)
    if not (np.isfinite(value) and lo <= value <= hi):
        raise ValidationError(f"{name}: must be in [{lo}, {hi}], got {value}")
    return value


def _check_rate(name: str, value: float) -> float:
    value = float(value)
    if not (np.isfinite(value) and value >= 0.0):
        raise ValidationError(f"{name}: must be a finite rate >= 0, got {value}")
    return value


@dataclass(frozen=True)
class ParallelBinaryMrcd:
    """Two parallel binary symmetric source-relay links, state on the first.

    ``delta`` is the crossover probability of both links' noise, ``p_z`` the
    Bernoulli parameter of the state on the first link, ``r1`` the rate of
    the noiseless relay-destination pipe.
    """

    delta: float
    p_z: float
    r1: float

    def __post_init__(self):
        object.__setattr__(self, "delta", _check_unit_interval("delta", self.delta, 0.0, 0.5))
        object.__setattr__(self, "p_z", _check_unit_interval("p_z", self.p_z, 0.0, 1.0))
        object.__setattr__(self, "r1", _check_rate("r1", self.r1))


@dataclass(frozen=True)
class BinaryMrcd:
    """Single binary symmetric source-relay link with additive state."""

    delta: float
    p_z: float
    r1: float

    def __post_init__(self):
        object.__setattr__(self, "delta", _check_unit_interval("delta", self.delta, 0.0, 0.5))
        object.__setattr__(self, "p_z", _check_unit_interval("p_z", self.p_z, 0.0, 1.0))
        object.__setattr__(self, "r1", _check_rate("r1", self.r1))


@dataclass(frozen=True)
class GaussianMrcd:
    """AWGN source-relay link with destination side information.

    ``power`` is the source power constraint (linear scale), ``rho`` the
    correlation between the channel noise and the side information, ``r1``
    the rate of the noiseless relay-destination pipe.
    """

    power: float
    rho: float
    r1: float

    def __post_init__(self):
        power = float(self.power)
        if not (np.isfinite(power) and power > 0.0):
            raise ValidationError(f"power: must be > 0, got {power}")
        object.__setattr__(self, "power", power)
        object.__setattr__(self, "rho", _check_unit_interval("rho", self.rho, -1.0, 1.0))
        object.__setattr__(self, "r1", _check_rate("r1", self.r1))


@dataclass(frozen=True, eq=False)
class LinkCapacities:
    """Capacities of the orthogonal relay-destination / source-destination links."""

    r1: float
    r2: float
    argmax_pxr: Pmf
    argmax_px2: Pmf


def channel_capacity(
    w_yx: np.ndarray, *, tol: float = 1e-9, max_iters: int = 100_000
) -> tuple[float, np.ndarray]:
    """Capacity (bits) of a discrete memoryless channel via Blahut-Arimoto.

    ``w_yx[x, y]`` holds p(y | x); rows must be pmfs. Starts from the uniform
    input and stops once the duality gap max_x D(W(.|x) || q) - I(p) drops
    below ``tol`` bits, which sandwiches the returned value within ``tol`` of
    the true capacity. Raises ``SolverError`` (carrying the last gap) if the
    iteration cap is hit first.
    """
    w = np.asarray(w_yx, dtype=float)
    if w.ndim != 2:
        raise ValidationError(f"channel_capacity: expected a matrix, got {w.shape}")
    row_sums = w.sum(axis=1)
    if np.any(np.abs(row_sums - 1.0) > PROB_TOL) or float(w.min()) < -PROB_TOL:
        raise ValidationError("channel_capacity: rows must be conditional pmfs")
    w = np.clip(w, 0.0, None) / row_sums[:, None]
    n_in = w.shape[0]
    if n_in == 1:
        return 0.0, np.ones(1)

    ln2 = np.log(2.0)
    mask = w > 0.0
    log_w = np.where(mask, np.log(np.where(mask, w, 1.0)), 0.0)
    p = np.full(n_in, 1.0 / n_in)
    gap = np.inf
    for _ in range(max_iters):
        q = p @ w
        log_q = np.where(q > 0.0, np.log(np.where(q > 0.0, q, 1.0)), 0.0)
        # d[x] = D(W(.|x) || q) in nats; q > 0 wherever any w[x, y] > 0
        d = np.where(mask, w * (log_w - log_q[None, :]), 0.0).sum(axis=1)
        i_lower = float(p @ d)
        i_upper = float(d.max())
        gap = (i_upper - i_lower) / ln2
        if gap < tol:
            return max(i_lower / ln2, 0.0), p
        p = p * np.exp(d - i_upper)
        p = p / p.sum()
    raise SolverError(
        f"Blahut-Arimoto did not converge in {max_iters} iterations (gap {gap:.3e} bits)",
        gap=gap,
    )


def _state_compound_matrix(chan: np.ndarray, p_z: Pmf) -> np.ndarray:
    """Channel input -> (state, output) matrix p(z, y | x) = p(z) p(y | x, z)."""
    n_in, n_z, n_out = chan.shape
    return (chan * p_z.probs[None, :, None]).reshape(n_in, n_z * n_out)


def link_capacities(m: DiscreteOrcd, *, tol: float = 1e-9) -> LinkCapacities:
    """max I(X_R; Y1 | Z) and max I(X2; Y2 | Z) over the input distributions.

    The input of each link is independent of the state, so the conditional
    mutual information equals the mutual information of the compound channel
    input -> (output, state), which Blahut-Arimoto maximises directly. A bit
    pipe short-circuits the relay-destination link.
    """
    if m.r1_pipe is not None:
        r1, pxr = m.r1_pipe, np.full(m.n_xr, 1.0 / m.n_xr)
    else:
        r1, pxr = channel_capacity(_state_compound_matrix(m.chan_rd, m.p_z), tol=tol)
    r2, px2 = channel_capacity(_state_compound_matrix(m.chan_sd, m.p_z), tol=tol)
    return LinkCapacities(r1=r1, r2=r2, argmax_pxr=Pmf(pxr), argmax_px2=Pmf(px2))


def _trivial_channel(n_z: int) -> np.ndarray:
    return np.ones((1, n_z, 1))


def reduce_to_mrcd(m: DiscreteOrcd) -> DiscreteOrcd:
    """Remove the direct source-destination channel (single-letter alphabets).

    The result carries zero bits on the direct link, so its r2 is exactly 0.
    Idempotent.
    """
    return dataclasses.replace(m, chan_sd=_trivial_channel(m.n_z))


def _bsc_rows(delta: float) -> np.ndarray:
    return np.array([[1.0 - delta, delta], [delta, 1.0 - delta]])


def embed_binary(m: BinaryMrcd) -> DiscreteOrcd:
    """Discrete table form of the binary multihop channel Y_R = X1 + N + Z (mod 2)."""
    k = _bsc_rows(m.delta)
    chan_sr = np.empty((2, 2, 2))
    for x in range(2):
        for z in range(2):
            chan_sr[x, z, :] = k[x ^ z, :]
    return DiscreteOrcd(
        p_z=Pmf([1.0 - m.p_z, m.p_z]),
        chan_sr=chan_sr,
        chan_rd=_trivial_channel(2),
        chan_sd=_trivial_channel(2),
        r1_pipe=m.r1,
    )


def embed_parallel_binary(m: ParallelBinaryMrcd) -> DiscreteOrcd:
    """Discrete table form of the parallel binary multihop channel.

    The 4-ary input/output alphabets index the bit pairs (first link, second
    link) as ``2*b1 + b2``; only the first link sees the state.
    """
    k = _bsc_rows(m.delta)
    chan_sr = np.empty((4, 2, 4))
    for b1 in range(2):
        for b2 in range(2):
            for z in range(2):
                for c1 in range(2):
                    for c2 in range(2):
                        chan_sr[2 * b1 + b2, z, 2 * c1 + c2] = k[b1 ^ z, c1] * k[b2, c2]
    return DiscreteOrcd(
        p_z=Pmf([1.0 - m.p_z, m.p_z]),
        chan_sr=chan_sr,
        chan_rd=_trivial_channel(2),
        chan_sd=_trivial_channel(2),
        r1_pipe=m.r1,
    )


def as_discrete(model) -> DiscreteOrcd:
    """Embed a shorthand model into table form; identity on table models."""
    if isinstance(model, DiscreteOrcd):
        return model
    if isinstance(model, BinaryMrcd):
        return embed_binary(model)
    if isinstance(model, ParallelBinaryMrcd):
        return embed_parallel_binary(model)
    if isinstance(model, GaussianMrcd):
        raise UsageError("gaussian models are continuous and have no table form")
    raise UsageError(f"unsupported model type {type(model).__name__}")


# ---------------------------------------------------------------------------
# JSON model files
# ---------------------------------------------------------------------------

_ALPHABET_KEYS = ("x1", "x2", "xr", "yr", "y1", "y2", "z")


def _require(d: dict, key: str, *, path: str = "") -> Any:
    if key not in d:
        raise ValidationError(f"{path}{key}: missing field")
    return d[key]


def _number(d: dict, key: str) -> float:
    val = _require(d, key)
    if not isinstance(val, (int, float)) or isinstance(val, bool):
        raise ValidationError(f"{key}: expected a number, got {val!r}")
    return float(val)


def model_from_dict(d: dict):
    """Parse a model description; raises ``ValidationError`` with field paths."""
    if not isinstance(d, dict):
        raise ValidationError("model: expected a JSON object")
    kind = _require(d, "type")
    if kind == "parallel_binary":
        return ParallelBinaryMrcd(
            delta=_number(d, "delta"), p_z=_number(d, "p_z"), r1=_number(d, "r1")
        )
    if kind == "binary":
        return BinaryMrcd(
            delta=_number(d, "delta"), p_z=_number(d, "p_z"), r1=_number(d, "r1")
        )
    if kind == "gaussian":
        return GaussianMrcd(
            power=_number(d, "power"), rho=_number(d, "rho"), r1=_number(d, "r1")
        )
    if kind == "discrete_orcd":
        alphabets = _require(d, "alphabets")
        if not isinstance(alphabets, dict):
            raise ValidationError("alphabets: expected an object")
        sizes = {}
        for key in _ALPHABET_KEYS:
            val = _require(alphabets, key, path="alphabets.")
            if not isinstance(val, int) or isinstance(val, bool) or val < 1:
                raise ValidationError(f"alphabets.{key}: expected a positive integer")
            sizes[key] = val
        p_z = _require(d, "p_z")
        try:
            pz = Pmf(np.asarray(p_z, dtype=float))
        except (ValidationError, ValueError) as e:
            raise ValidationError(f"p_z: {e}") from None
        if len(pz) != sizes["z"]:
            raise ValidationError(f"p_z: length {len(pz)} != alphabets.z {sizes['z']}")
        tables = {}
        for name, (n_in, n_out) in {
            "chan_sr": (sizes["x1"], sizes["yr"]),
            "chan_rd": (sizes["xr"], sizes["y1"]),
            "chan_sd": (sizes["x2"], sizes["y2"]),
        }.items():
            raw = _require(d, name)
            try:
                arr = np.asarray(raw, dtype=float)
            except ValueError:
                raise ValidationError(f"{name}: expected a numeric 3-d array") from None
            if arr.shape != (n_in, sizes["z"], n_out):
                raise ValidationError(
                    f"{name}: shape {arr.shape} != ({n_in}, {sizes['z']}, {n_out})"
                )
            tables[name] = arr
        r1_pipe = d.get("r1_pipe")
        if r1_pipe is not None:
            if not isinstance(r1_pipe, (int, float)) or isinstance(r1_pipe, bool):
                raise ValidationError("r1_pipe: expected a number")
            r1_pipe = float(r1_pipe)
        return DiscreteOrcd(p_z=pz, r1_pipe=r1_pipe, **tables)
    raise ValidationError(f"type: unknown model type {kind!r}")


def model_to_dict(model) -> dict:
    if isinstance(model, ParallelBinaryMrcd):
        return {"type": "parallel_binary", "delta": model.delta, "p_z": model.p_z, "r1": model.r1}
    if isinstance(model, BinaryMrcd):
        return {"type": "binary", "delta": model.delta, "p_z": model.p_z, "r1": model.r1}
    if isinstance(model, GaussianMrcd):
        return {"type": "gaussian", "power": model.power, "rho": model.rho, "r1": model.r1}
    if isinstance(model, DiscreteOrcd):
        out = {
            "type": "discrete_orcd",
            "alphabets": {
                "x1": model.n_x1, "x2": model.n_x2, "xr": model.n_xr,
                "yr": model.n_yr, "y1": model.n_y1, "y2": model.n_y2, "z": model.n_z,
            },
            "p_z": model.p_z.probs.tolist(),
            "chan_sr": model.chan_sr.tolist(),
            "chan_rd": model.chan_rd.tolist(),
            "chan_sd": model.chan_sd.tolist(),
        }
        if model.r1_pipe is not None:
            out["r1_pipe"] = model.r1_pipe
        return out
    raise UsageError(f"unsupported model type {type(model).__name__}")


def load_model(path):
    """Load and validate a model JSON file."""
    with open(path, "r", encoding="utf-8") as fh:
        try:
            raw = json.load(fh)
        except json.JSONDecodeError as e:
            raise ValidationError(f"model file is not valid JSON: {e}") from None
    return model_from_dict(raw)


def dump_model(model, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(model_to_dict(model), fh, indent=2, sort_keys=True)
        fh.write("\n")
