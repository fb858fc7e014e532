from .channels import ChannelError, SurveyChannel, load_channel, load_channel_file
from .spectrum import Spectrum, SpectrumError, a_weighting_db, amplitude_spectrum
from .criteria import (
    CriterionResult,
    check_ac_magnetic,
    check_dc_magnetic,
    check_humidity,
    check_sound,
    check_temperature,
    check_vibration,
)
from .report import SiteReport, SitingRules, evaluate_site, load_channel_dir

__all__ = [
    "ChannelError",
    "SurveyChannel",
    "load_channel",
    "load_channel_file",
    "Spectrum",
    "SpectrumError",
    "a_weighting_db",
    "amplitude_spectrum",
    "CriterionResult",
    "check_dc_magnetic",
    "check_ac_magnetic",
    "check_vibration",
    "check_sound",
    "check_temperature",
    "check_humidity",
    "SiteReport",
    "SitingRules",
    "evaluate_site",
    "load_channel_dir",
]
