"""Energy, power, throughput, and area accounting for the AND-array engine.

Per-bit energies are calibrated constants measured on the 180nm prototype
at 50 MHz with balanced 50% bit statistics, so workload figures derived
from them are estimates of that operating point, not circuit simulation.
Technology scaling is expressed purely through user-supplied factor sets
(energy, delay, area ratios) keyed by node name; a factor file for 22nm
ships with the package.
"""

from __future__ import annotations

import configparser
import io
from dataclasses import dataclass, replace
from importlib import resources

__all__ = [
    "EnergyParams",
    "GeometryParams",
    "ScalingFactors",
    "MetricsReport",
    "WorkloadEnergy",
    "mac_energy",
    "throughput",
    "efficiency",
    "workload_energy",
    "scale_to_node",
    "load_config",
    "builtin_scaling_factors",
    "report_table",
    "report_csv",
]


@dataclass(frozen=True)
class EnergyParams:
    """Per-bit operation energies in femtojoules."""

    read_fj_per_bit: float = 237.0
    mult_single_fj_per_bit: float = 216.0
    mult_vmm_fj_per_bit: float = 178.0
    accum_fj_per_bit: float = 102.65

    def __post_init__(self):
        vals = (self.read_fj_per_bit, self.mult_single_fj_per_bit,
                self.mult_vmm_fj_per_bit, self.accum_fj_per_bit)
        if any(v <= 0 for v in vals):
            raise ValueError("energy parameters must be positive")
        if not (self.mult_vmm_fj_per_bit <= self.mult_single_fj_per_bit
                <= self.read_fj_per_bit):
            raise ValueError("expected mult_vmm <= mult_single <= read")

    def mult(self, mode):
        if mode == "vmm":
            return self.mult_vmm_fj_per_bit
        if mode == "single":
            return self.mult_single_fj_per_bit
        raise ValueError(f"mode must be 'vmm' or 'single', got {mode!r}")


@dataclass(frozen=True)
class GeometryParams:
    rows: int = 128
    cols: int = 256
    arrays_per_bank: int = 4
    banks: int = 1
    frequency_hz: float = 50e6
    word_bits: int = 8
    computing_area_mm2: float = 0.804241  # effective area of one 4 KB array

    @property
    def arrays(self):
        return self.arrays_per_bank * self.banks

    @property
    def macs_per_cycle_per_array(self):
        return self.cols // self.word_bits

    @classmethod
    def single_array(cls, **kw):
        return cls(arrays_per_bank=1, banks=1, **kw)

    @classmethod
    def engine_1mb(cls, **kw):
        """64 banks of four 4 KB arrays each."""
        return cls(arrays_per_bank=4, banks=64, **kw)


@dataclass(frozen=True)
class ScalingFactors:
    """Multipliers mapping 180nm metrics to a target node."""

    energy_ratio: float
    delay_ratio: float
    area_ratio: float

    def __post_init__(self):
        if min(self.energy_ratio, self.delay_ratio, self.area_ratio) <= 0:
            raise ValueError("scaling factors must be positive")

    def compose(self, other):
        return ScalingFactors(
            energy_ratio=self.energy_ratio * other.energy_ratio,
            delay_ratio=self.delay_ratio * other.delay_ratio,
            area_ratio=self.area_ratio * other.area_ratio,
        )


IDENTITY_SCALING = ScalingFactors(1.0, 1.0, 1.0)


@dataclass(frozen=True)
class MetricsReport:
    node: str
    frequency_hz: float
    mac_energy_pj: float
    throughput_gops: float
    power_mw: float
    tops_per_watt: float
    gops_per_mm2: float
    area_mm2: float


def mac_energy(params, mode="vmm", word_bits=8):
    """Energy of one multiply-accumulate in picojoules.

    One MAC touches ``word_bits`` bits of multiplication plus the matching
    accumulation share; at 8 bits the VMM figure is 2.2452 pJ.
    """
    if word_bits < 1:
        raise ValueError("word_bits must be >= 1")
    return (params.mult(mode) + params.accum_fj_per_bit) * word_bits / 1000.0


def throughput(geometry):
    """Peak throughput in GOPS (one MAC = 2 ops, one AND row per cycle)."""
    macs_per_cycle = geometry.arrays * geometry.macs_per_cycle_per_array
    return macs_per_cycle * 2 * geometry.frequency_hz / 1e9


def efficiency(energy=None, geometry=None, mode="vmm", node="180nm"):
    """Full metrics report at one operating point."""
    energy = energy or EnergyParams()
    geometry = geometry or GeometryParams.single_array()
    if geometry.computing_area_mm2 <= 0:
        raise ValueError("computing area must be positive")
    mac_pj = mac_energy(energy, mode, geometry.word_bits)
    gops = throughput(geometry)
    tops_w = 2.0 / mac_pj  # ops per picojoule == TOPS/W
    total_area = geometry.computing_area_mm2 * geometry.arrays
    power_mw = (gops / tops_w) if tops_w > 0 else 0.0  # GOPS / (TOPS/W) = mW
    return MetricsReport(
        node=node,
        frequency_hz=geometry.frequency_hz,
        mac_energy_pj=mac_pj,
        throughput_gops=gops,
        power_mw=power_mw,
        tops_per_watt=tops_w,
        gops_per_mm2=gops / total_area if total_area else 0.0,
        area_mm2=total_area,
    )


@dataclass(frozen=True)
class WorkloadEnergy:
    """Estimated energy breakdown of one executed schedule (femtojoules)."""

    mode: str
    mult_fj: float
    accum_fj: float
    read_fj: float

    @property
    def total_fj(self):
        return self.mult_fj + self.accum_fj + self.read_fj

    @property
    def total_pj(self):
        return self.total_fj / 1000.0


def workload_energy(stats, params=None, mode="vmm", row_bits=256):
    """Charge a schedule at per-bit averages: AND rows, periphery passes,
    and 256-bit input loads from the input array."""
    params = params or EnergyParams()
    return WorkloadEnergy(
        mode=mode,
        mult_fj=stats.and_ops * params.mult(mode) * row_bits,
        accum_fj=stats.accumulator_invocations * params.accum_fj_per_bit * row_bits,
        read_fj=stats.input_reads * params.read_fj_per_bit * row_bits,
    )


def scale_to_node(report, factors, node=None):
    """Apply technology scaling: energy and area multiply by their ratios,
    frequency divides by the delay ratio, efficiencies are recomputed."""
    mac_pj = report.mac_energy_pj * factors.energy_ratio
    freq = report.frequency_hz / factors.delay_ratio
    gops = report.throughput_gops / factors.delay_ratio
    area = report.area_mm2 * factors.area_ratio
    tops_w = 2.0 / mac_pj
    return MetricsReport(
        node=node or report.node,
        frequency_hz=freq,
        mac_energy_pj=mac_pj,
        throughput_gops=gops,
        power_mw=gops / tops_w,
        tops_per_watt=tops_w,
        gops_per_mm2=gops / area if area else 0.0,
        area_mm2=area,
    )


def _parse_scaling(section):
    return ScalingFactors(
        energy_ratio=float(section["energy_ratio"]),
        delay_ratio=float(section["delay_ratio"]),
        area_ratio=float(section["area_ratio"]),
    )


def load_config(text):
    """Parse a ``key = value`` config: [energy], [geometry], [scaling.<node>].

    Returns (EnergyParams, GeometryParams, {node: ScalingFactors}); absent
    sections fall back to defaults.
    """
    cp = configparser.ConfigParser()
    cp.read_string(text)
    energy = EnergyParams()
    if cp.has_section("energy"):
        energy = replace(
            energy, **{k: float(v) for k, v in cp.items("energy")}
        )
    geometry = GeometryParams.single_array()
    if cp.has_section("geometry"):
        ints = {"rows", "cols", "arrays_per_bank", "banks", "word_bits"}
        kw = {}
        for k, v in cp.items("geometry"):
            kw[k] = int(v) if k in ints else float(v)
        geometry = replace(geometry, **kw)
    scaling = {}
    for section in cp.sections():
        if section.startswith("scaling."):
            scaling[section.split(".", 1)[1]] = _parse_scaling(cp[section])
    return energy, geometry, scaling


def builtin_scaling_factors():
    """Factor sets shipped with the package (currently the 22nm set)."""
    text = resources.files("oisma.data").joinpath("nodes.ini").read_text()
    _, _, scaling = load_config(text)
    return scaling


_TABLE_ROWS = (
    ("Technology", "node", "{}"),
    ("Frequency", "frequency_hz", "{:.6g} Hz"),
    ("Energy/MAC", "mac_energy_pj", "{:.6g} pJ"),
    ("Throughput (TOPS)", "throughput_gops", None),  # emitted in TOPS below
    ("Power", "power_mw", "{:.4g} mW"),
    ("Energy Efficiency (TOPS/W)", "tops_per_watt", "{:.4g}"),
    ("Area Efficiency (TOPS/mm2)", "gops_per_mm2", None),
)


def report_table(reports):
    """Human-readable metrics table, one column per node."""
    lines = []
    for label, attr, fmt in _TABLE_ROWS:
        cells = []
        for r in reports:
            v = getattr(r, attr)
            if attr == "throughput_gops":
                cells.append(f"{v / 1000.0:.6g}")
            elif attr == "gops_per_mm2":
                cells.append(f"{v / 1000.0:.4g}")
            elif fmt is None:
                cells.append(str(v))
            else:
                cells.append(fmt.format(v))
        lines.append(f"{label:<28}" + "  ".join(f"{c:>16}" for c in cells))
    return "\n".join(lines) + "\n"


def report_csv(reports):
    buf = io.StringIO()
    buf.write("node,frequency_hz,mac_energy_pj,throughput_gops,power_mw,"
              "tops_per_watt,gops_per_mm2,area_mm2\n")
    for r in reports:
        buf.write(
            f"{r.node},{r.frequency_hz!r},{r.mac_energy_pj!r},"
            f"{r.throughput_gops!r},{r.power_mw!r},{r.tops_per_watt!r},"
            f"{r.gops_per_mm2!r},{r.area_mm2!r}\n"
        )
    return buf.getvalue()
