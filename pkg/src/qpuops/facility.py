"""Cryostat and plant model: thermal excursions, power, and recovery.

Warming follows a single-exponential approach to ambient whose time
constant is pinned by one calibration point: starting from base, the
mixing-chamber reading crosses 1 K two minutes after cooling stops.
Everything else (UPS bridging, chilled-water failover, the repair and
cooldown chain after a warm excursion) is bookkeeping around that curve.

The facility is a passive state machine.  It never schedules anything;
`inject_fault` returns a fully worked plan with every timestamp the event
loop needs, and the runtime feeds mode changes back in with `enter_mode`.
Only one fault may be in flight at a time, which in particular rejects
the overlapping same-kind injections the scenario format forbids.
"""

from __future__ import annotations

import bisect
import enum
import math
from dataclasses import dataclass, field

DAY_S = 86400.0

FAULT_GRID_LOSS = "grid_loss"
FAULT_COOLING_LOSS = "cooling_loss"
FAULT_VACUUM_BREACH = "vacuum_breach"
FAULT_KINDS = (FAULT_GRID_LOSS, FAULT_COOLING_LOSS, FAULT_VACUUM_BREACH)


class FacilityError(RuntimeError):
    pass


class CryostatMode(str, enum.Enum):
    OPERATING = "operating"
    DEGRADED = "degraded"            # fault active, payload still cold
    WARMED_UP = "warmed-up"          # crossed the warm threshold
    REPAIR = "repair"                # manual intervention point
    COOLDOWN = "cooldown"
    RECALIBRATING = "recalibrating"
    BENCHMARKING = "benchmarking"
    MAINTENANCE = "maintenance"


# modes in which the device cannot take jobs
UNAVAILABLE_MODES = frozenset({
    CryostatMode.WARMED_UP,
    CryostatMode.REPAIR,
    CryostatMode.COOLDOWN,
    CryostatMode.RECALIBRATING,
    CryostatMode.BENCHMARKING,
    CryostatMode.MAINTENANCE,
})


@dataclass
class FacilityConfig:
    base_temp_k: float = 0.010
    ambient_temp_k: float = 295.0
    warm_threshold_k: float = 1.0
    # calibration point for the warming exponential: base -> threshold takes this long
    time_to_threshold_s: float = 120.0
    operating_power_kw: float = 20.0
    cooldown_power_kw: float = 30.0
    ups_runtime_s: float = 600.0
    redundant_cooling: bool = True
    failover_delay_s: float = 30.0
    cooldown_days_at_threshold: float = 2.0
    cooldown_days_at_ambient: float = 5.0
    repair_duration_s: float = 0.0
    ln2_topup_interval_s: float = 7 * DAY_S
    ln2_topup_liters: float = 10.0
    water_temp_min_c: float = 15.0
    water_temp_max_c: float = 25.0

    def __post_init__(self):
        if not (0.0 < self.base_temp_k < self.warm_threshold_k < self.ambient_temp_k):
            raise ValueError("need base < threshold < ambient, all positive")
        if self.time_to_threshold_s <= 0:
            raise ValueError("time_to_threshold_s must be positive")
        if self.ups_runtime_s < 0 or self.failover_delay_s < 0:
            raise ValueError("bridge durations cannot be negative")
        if self.cooldown_days_at_threshold > self.cooldown_days_at_ambient:
            raise ValueError("cooldown duration must not shrink with peak temperature")

    @property
    def warmup_tau_s(self) -> float:
        span0 = self.ambient_temp_k - self.base_temp_k
        span1 = self.ambient_temp_k - self.warm_threshold_k
        return self.time_to_threshold_s / math.log(span0 / span1)

    def warmup_temperature(self, start_k: float, dt_s: float) -> float:
        """Temperature dt seconds after cooling stops, starting from start_k."""
        if dt_s < 0:
            raise ValueError("dt_s must be non-negative")
        return self.ambient_temp_k - (self.ambient_temp_k - start_k) * math.exp(
            -dt_s / self.warmup_tau_s)

    def thermal_step(self, dt_s: float) -> float:
        """Warming from base; thermal_step(time_to_threshold_s) == warm_threshold_k."""
        return self.warmup_temperature(self.base_temp_k, dt_s)

    def cooldown_duration_s(self, peak_k: float) -> float:
        """Linear in peak between the threshold and ambient anchors, clamped."""
        lo = self.cooldown_days_at_threshold
        hi = self.cooldown_days_at_ambient
        frac = (peak_k - self.warm_threshold_k) / (self.ambient_temp_k - self.warm_threshold_k)
        days = lo + (hi - lo) * frac
        return min(max(days, lo), hi) * DAY_S

    @classmethod
    def from_dict(cls, d: dict) -> "FacilityConfig":
        return cls(**d)


@dataclass(frozen=True)
class FaultPlan:
    """Every timestamp a fault will produce, computed at injection time."""

    kind: str
    start_s: float
    end_s: float
    warming_start_s: float | None
    warming_end_s: float | None
    ups_exhausted_s: float | None
    failover_restored_s: float | None
    crossing_s: float | None
    peak_k: float
    auto_restore: bool
    repair_start_s: float | None
    cooldown_start_s: float | None
    cooldown_end_s: float | None

    def to_dict(self) -> dict:
        return {k: getattr(self, k) for k in self.__dataclass_fields__}


class Facility:
    def __init__(self, config: FacilityConfig | None = None):
        self.config = config if config is not None else FacilityConfig()
        base = self.config.base_temp_k
        # temperature timeline: (start_s, model, params), appended in time order
        self._segments: list[tuple[float, str, tuple]] = [(0.0, "hold", (base,))]
        self.mode_history: list[tuple[float, CryostatMode]] = [(0.0, CryostatMode.OPERATING)]
        self.fault_plans: list[FaultPlan] = []
        self.ln2_used_l: float = 0.0

    # -- queries ------------------------------------------------------------

    def mode_at(self, t: float) -> CryostatMode:
        idx = bisect.bisect_right([h[0] for h in self.mode_history], t) - 1
        return self.mode_history[max(idx, 0)][1]

    @property
    def mode(self) -> CryostatMode:
        return self.mode_history[-1][1]

    def temperature_k(self, t: float) -> float:
        idx = bisect.bisect_right([s[0] for s in self._segments], t) - 1
        start, model, params = self._segments[max(idx, 0)]
        if model == "hold":
            return params[0]
        if model == "warmup":
            return self.config.warmup_temperature(params[0], max(t - start, 0.0))
        # linear ramp back to base over the cooldown window
        peak, duration = params
        frac = min(max((t - start) / duration, 0.0), 1.0)
        return peak + (self.config.base_temp_k - peak) * frac

    def power_draw_kw(self, t: float) -> float:
        for plan in self.fault_plans:
            if (plan.kind == FAULT_GRID_LOSS and plan.warming_start_s is not None
                    and plan.warming_start_s <= t < plan.end_s):
                return 0.0  # grid down and the UPS is flat
        if self.mode_at(t) is CryostatMode.COOLDOWN:
            return self.config.cooldown_power_kw
        return self.config.operating_power_kw

    def manual_interventions(self, up_to_s: float = math.inf) -> int:
        return sum(1 for t, m in self.mode_history
                   if m is CryostatMode.REPAIR and t <= up_to_s)

    def downtime_s(self, t0: float, t1: float) -> float:
        """Seconds inside [t0, t1] spent in a mode that cannot take jobs."""
        total = 0.0
        for i, (start, m) in enumerate(self.mode_history):
            end = self.mode_history[i + 1][0] if i + 1 < len(self.mode_history) else t1
            if m in UNAVAILABLE_MODES:
                total += max(0.0, min(end, t1) - max(start, t0))
        return total

    # -- transitions ----------------------------------------------------------

    def enter_mode(self, t: float, mode: CryostatMode) -> None:
        if t < self.mode_history[-1][0]:
            raise FacilityError(
                f"mode change at t={t} precedes last transition at {self.mode_history[-1][0]}")
        self.mode_history.append((t, mode))

    def note_ln2_topup(self, liters: float | None = None) -> float:
        amount = self.config.ln2_topup_liters if liters is None else liters
        self.ln2_used_l += amount
        return self.ln2_used_l

    def inject_fault(self, kind: str, t: float, duration_s: float) -> FaultPlan:
        """Work out the complete consequence timeline of one fault.

        Raises if another fault or its recovery is still in progress, which
        covers the forbidden overlap of two faults of the same kind.
        """
        if kind not in FAULT_KINDS:
            raise FacilityError(f"unknown fault kind {kind!r}")
        if duration_s <= 0:
            raise FacilityError("fault duration must be positive")
        current = self.mode_at(t)
        if current is not CryostatMode.OPERATING or self.mode_history[-1][0] > t:
            raise FacilityError(
                f"fault {kind!r} at t={t} rejected: facility busy (mode={current.value})")

        cfg = self.config
        end = t + duration_s
        ups_exhausted = None
        failover = None
        if kind == FAULT_GRID_LOSS:
            w0 = t + min(cfg.ups_runtime_s, duration_s)
            w1 = end
            if duration_s > cfg.ups_runtime_s:
                ups_exhausted = w0
        elif kind == FAULT_COOLING_LOSS:
            w0 = t
            if cfg.redundant_cooling:
                w1 = t + min(duration_s, cfg.failover_delay_s)
                if duration_s > cfg.failover_delay_s:
                    failover = w1
            else:
                w1 = end
        else:  # vacuum breach: warming from the moment of the breach until repaired
            w0, w1 = t, end

        warming = w1 > w0
        peak = cfg.warmup_temperature(cfg.base_temp_k, w1 - w0) if warming else cfg.base_temp_k
        auto = peak <= cfg.warm_threshold_k
        crossing = w0 + cfg.time_to_threshold_s if not auto else None

        repair_start = cooldown_start = cooldown_end = None
        if not auto:
            repair_start = end
            cooldown_start = end + cfg.repair_duration_s
            cooldown_end = cooldown_start + cfg.cooldown_duration_s(peak)

        plan = FaultPlan(
            kind=kind, start_s=t, end_s=end,
            warming_start_s=w0 if warming else None,
            warming_end_s=w1 if warming else None,
            ups_exhausted_s=ups_exhausted,
            failover_restored_s=failover,
            crossing_s=crossing,
            peak_k=peak,
            auto_restore=auto,
            repair_start_s=repair_start,
            cooldown_start_s=cooldown_start,
            cooldown_end_s=cooldown_end,
        )
        self.fault_plans.append(plan)

        if warming:
            self._segments.append((w0, "warmup", (cfg.base_temp_k,)))
            if auto:
                self._segments.append((w1, "hold", (cfg.base_temp_k,)))
            else:
                self._segments.append((w1, "hold", (peak,)))
                self._segments.append(
                    (cooldown_start, "cooldown", (peak, cooldown_end - cooldown_start)))
                self._segments.append((cooldown_end, "hold", (cfg.base_temp_k,)))

        # mode timeline through the end of cooldown; the runtime appends the
        # recalibration / benchmarking / operating tail as those steps run
        self.enter_mode(t, CryostatMode.DEGRADED)
        if auto:
            self.enter_mode(end, CryostatMode.OPERATING)
        else:
            self.enter_mode(crossing, CryostatMode.WARMED_UP)
            self.enter_mode(repair_start, CryostatMode.REPAIR)
            self.enter_mode(cooldown_start, CryostatMode.COOLDOWN)
        return plan
