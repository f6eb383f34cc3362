from promkit.acoustics.waveio import Waveform, read_wav, resample, write_wav
from promkit.acoustics.tracks import CompositeSignal, FrameTrack, TrackKind, combine_composite
from promkit.acoustics.pitch import PitchConfig, estimate_f0, track_f0
from promkit.acoustics.energy import extract_energy
from promkit.acoustics.duration import DurationUnit, build_duration_signal

__all__ = [
    "Waveform",
    "read_wav",
    "resample",
    "write_wav",
    "FrameTrack",
    "TrackKind",
    "CompositeSignal",
    "combine_composite",
    "PitchConfig",
    "track_f0",
    "estimate_f0",
    "extract_energy",
    "DurationUnit",
    "build_duration_signal",
]
