"""Detection model of the triple-slit spatial-bin apparatus.

A detector in the image plane sits on one slit image and projects onto a
computational state |n>. A detector at position x in the focal plane
projects onto |phi(theta)> = |0> + e^{i theta}|1> + e^{2 i theta}|2> with

    theta = 2 pi x d / (lambda f),

weighted by the single-slit envelope sinc^2(k_x a / 2), k_x = 2 pi x / (lambda f).
Positions are in micrometres, the focal length in millimetres.
"""

import attr
from typing import Optional, Tuple
import numpy as np
from scipy.signal import find_peaks  # type: ignore
from scipy.special import erf  # type: ignore

from py_qutrit_correlations.errors import DimensionError, DomainError, InsufficientSpan
from py_qutrit_correlations.states import SchmidtState
from py_qutrit_correlations.utils.attrib_utils import (
    is_dimension,
    positive_float_validator,
)

import logging

logger = logging.getLogger(__name__)

UM_PER_MM = 1000.0


@attr.s(frozen=True)
class OpticsGeometry:
    """Slit and lens parameters

    Args:
        slit_width_a (float): slit width in um
        slit_separation_d (float): centre-to-centre slit distance in um
        wavelength_lambda (float): down-converted wavelength in um
        focal_length_f (float): focal length of the detection lens in mm
        n_slits (int): number of slits
        magnification (float): image-plane magnification of the slit images
    """

    slit_width_a: float = attr.ib(default=30.0, validator=positive_float_validator)
    slit_separation_d: float = attr.ib(
        default=100.0, validator=positive_float_validator
    )
    wavelength_lambda: float = attr.ib(
        default=0.810, validator=positive_float_validator
    )
    focal_length_f: float = attr.ib(default=75.0, validator=positive_float_validator)
    n_slits: int = attr.ib(default=3, validator=is_dimension)
    magnification: float = attr.ib(default=1.0, validator=positive_float_validator)

    @slit_separation_d.validator
    def _check_separation(self, attribute, value):
        if value <= self.slit_width_a:
            raise DomainError(
                f"Slit separation {value} um must exceed slit width {self.slit_width_a} um"
            )

    @property
    def focal_length_um(self) -> float:
        return self.focal_length_f * UM_PER_MM


@attr.s(frozen=True, eq=False)
class Profile:
    """Normalized intensity sampled along a detector scan

    Args:
        positions (np.ndarray): strictly increasing positions in um
        values (np.ndarray): nonnegative values with maximum 1
        fringe_period (float, optional): interference period in um, if any
    """

    positions: np.ndarray = attr.ib(converter=lambda v: np.asarray(v, dtype=float))
    values: np.ndarray = attr.ib(converter=lambda v: np.asarray(v, dtype=float))
    fringe_period: Optional[float] = attr.ib(default=None)

    @positions.validator
    def _check_positions(self, attribute, value):
        if value.ndim != 1 or np.any(np.diff(value) <= 0):
            raise DomainError("Profile positions must be strictly increasing")

    @values.validator
    def _check_values(self, attribute, value):
        if value.shape != self.positions.shape:
            raise DimensionError(
                f"{value.shape} values for {self.positions.shape} positions"
            )
        if np.any(value < 0):
            raise DomainError("Profile values must be nonnegative")

    @property
    def samples(self):
        return list(zip(self.positions.tolist(), self.values.tolist()))


def _check_qutrit(state: SchmidtState, geom: OpticsGeometry) -> None:
    if state.dim != geom.n_slits:
        raise DimensionError(
            f"State of dimension {state.dim} for {geom.n_slits} slits"
        )


def scan_positions(x_min: float, x_max: float, step: float) -> np.ndarray:
    """x_min, x_min + step, ... up to x_max inclusive"""
    if not x_min < x_max:
        raise DomainError(f"Empty scan range [{x_min}, {x_max}]")
    if not step > 0:
        raise DomainError(f"Scan step must be positive, got {step}")
    n_samples = int(np.floor((x_max - x_min) / step + 1e-9)) + 1
    return x_min + step * np.arange(n_samples)


def _peak_normalize(values: np.ndarray) -> np.ndarray:
    peak = float(np.max(values))
    if peak <= 0:
        logger.warning("Profile is identically zero, leaving it unnormalized")
        return values
    return values / peak


def theta_of_position(x: float, geom: OpticsGeometry) -> float:
    """Phase parameter theta = 2 pi x d / (lambda f)"""
    return (
        2.0 * np.pi * x * geom.slit_separation_d
        / (geom.wavelength_lambda * geom.focal_length_um)
    )


def fringe_period(geom: OpticsGeometry) -> float:
    """Focal-plane fringe period lambda f / d in um"""
    return geom.wavelength_lambda * geom.focal_length_um / geom.slit_separation_d


def eigen_positions(geom: OpticsGeometry) -> Tuple[float, ...]:
    """Focal-plane positions where theta = 2 pi k / n_slits, i.e. the
    detector positions realizing the generalized sigma_x eigenstates"""
    period = fringe_period(geom)
    return tuple(k * period / geom.n_slits for k in range(geom.n_slits))


def _envelope(x: np.ndarray, geom: OpticsGeometry) -> np.ndarray:
    # sinc(u) = sin(u)/u with u = k_x a / 2; numpy's sinc carries a factor pi
    u = np.pi * x * geom.slit_width_a / (geom.wavelength_lambda * geom.focal_length_um)
    return np.sinc(u / np.pi) ** 2


def focal_amplitude_intensity(
    state: SchmidtState, geom: OpticsGeometry, x: np.ndarray
) -> np.ndarray:
    """|<phi(theta(x))|psi_local>|^2 without the slit envelope, where the
    local amplitudes are the Schmidt coefficients"""
    _check_qutrit(state, geom)
    theta = theta_of_position(np.asarray(x, dtype=float), geom)
    n = np.arange(state.dim)
    amplitude = np.exp(-1j * np.multiply.outer(theta, n)) @ state.array
    return np.abs(amplitude) ** 2


def focal_coincidence_profile(
    state: SchmidtState,
    geom: OpticsGeometry,
    x_min: float,
    x_max: float,
    step: float,
    background_rate: float = 0.0,
) -> Profile:
    """Idler coincidence profile in the focal plane with the signal detector
    fixed at the centre of its singles profile

    Args:
        state (SchmidtState): the qutrit state
        geom (OpticsGeometry): the apparatus
        x_min (float): first position in um
        x_max (float): last position in um
        step (float): sampling step in um
        background_rate (float, optional): uniform accidental fraction mixed
            in before normalization. Defaults to 0.

    Returns:
        Profile: the peak-normalized profile
    """
    if not 0.0 <= background_rate < 1.0:
        raise DomainError(f"background_rate must be in [0, 1), got {background_rate}")
    x = scan_positions(x_min, x_max, step)
    signal = _peak_normalize(_envelope(x, geom) * focal_amplitude_intensity(state, geom, x))
    values = _peak_normalize((1.0 - background_rate) * signal + background_rate)
    return Profile(x, values, fringe_period(geom))


def sigma_z_operator_positions(geom: OpticsGeometry) -> Tuple[float, ...]:
    """Image-plane slit-image centres, in slit order

    For three slits these carry the sigma_z = |0><0| - |2><2| eigenvalues
    (1, 0, -1).
    """
    pitch = geom.slit_separation_d * geom.magnification
    return tuple(n * pitch for n in range(geom.n_slits))


def image_plane_profile(
    state: SchmidtState,
    geom: OpticsGeometry,
    detector_sigma: float,
    x_range: Tuple[float, float],
    step: float,
) -> Profile:
    """Singles profile across the slit images

    Each slit image is a flat top of width a (times the magnification)
    weighted by |c_n|^2 and blurred by a Gaussian detector response of
    width detector_sigma.

    Args:
        state (SchmidtState): the qutrit state
        geom (OpticsGeometry): the apparatus
        detector_sigma (float): Gaussian detector width in um, >= 0
        x_range (Tuple[float, float]): (x_min, x_max) in um
        step (float): sampling step in um

    Returns:
        Profile: the peak-normalized profile
    """
    _check_qutrit(state, geom)
    if not detector_sigma >= 0:
        raise DomainError(f"detector_sigma must be >= 0, got {detector_sigma}")
    x = scan_positions(x_range[0], x_range[1], step)
    half_width = 0.5 * geom.slit_width_a * geom.magnification
    values = np.zeros_like(x)
    for centre, weight in zip(sigma_z_operator_positions(geom), state.probabilities):
        offset = x - centre
        if detector_sigma == 0:
            kernel = (np.abs(offset) <= half_width).astype(float)
        else:
            scale = np.sqrt(2.0) * detector_sigma
            kernel = 0.5 * (
                erf((offset + half_width) / scale) - erf((offset - half_width) / scale)
            )
        values += weight * kernel
    return Profile(x, _peak_normalize(values))


def visibility(profile: Profile, period: Optional[float] = None) -> float:
    """Fringe contrast (max - min) / (max + min) over one period centred on
    the highest sample

    Args:
        profile (Profile): a profile with at least 3 samples
        period (float, optional): fringe period in um. Defaults to
            profile.fringe_period.

    Raises:
        InsufficientSpan: if no period is known, or fewer than 3 samples or
            less than one period is covered

    Returns:
        float: the visibility in [0, 1]
    """
    period = profile.fringe_period if period is None else period
    if period is None:
        raise InsufficientSpan("Profile carries no fringe period and none was given")
    x, v = profile.positions, profile.values
    if x.size < 3 or x[-1] - x[0] < period:
        raise InsufficientSpan(
            f"Profile spans {x[-1] - x[0]} um, less than one period {period} um"
        )
    centre = x[int(np.argmax(v))]
    lo = min(max(centre - period / 2.0, x[0]), x[-1] - period)
    window = (x >= lo - 1e-9) & (x <= lo + period + 1e-9)
    v_max, v_min = float(np.max(v[window])), float(np.min(v[window]))
    if v_max + v_min == 0:
        return 0.0
    return (v_max - v_min) / (v_max + v_min)


def measure_fringe_period(
    profile: Profile,
    geom: Optional[OpticsGeometry] = None,
    min_height: float = 0.5,
) -> float:
    """Mean spacing of the principal interference maxima

    The single-slit envelope pulls every off-centre maximum towards x = 0,
    so when the geometry is given the envelope is divided out first.

    Args:
        profile (Profile): a focal-plane profile
        geom (OpticsGeometry, optional): the apparatus that produced it
        min_height (float, optional): peaks below this normalized height
            (secondary maxima) are ignored. Defaults to 0.5.

    Raises:
        InsufficientSpan: if fewer than two principal maxima are sampled

    Returns:
        float: the period in um
    """
    values = profile.values
    if geom is not None:
        envelope = _envelope(profile.positions, geom)
        values = np.where(envelope > 1e-9, values / np.maximum(envelope, 1e-9), 0.0)
        values = _peak_normalize(values)
    peaks, _ = find_peaks(values, height=min_height)
    if len(peaks) < 2:
        raise InsufficientSpan(f"Found {len(peaks)} principal maxima, need 2")
    return float(np.mean(np.diff(profile.positions[peaks])))
