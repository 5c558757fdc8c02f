"""Pseudo-analog video transmission with a nonlinear power transform.

SoftCast-style pipeline: 3D-DCT, chunking, power allocation on
signed-power-transformed coefficients, AWGN channel, LLSE decoding.
"""

from nlcast.allocation import AllocationPlan, allocate_nonlinear, allocate_softcast, predicted_distortion
from nlcast.channel import ChannelModel, SymbolStream, noise_variance_for_snr, serialize_symbols, deserialize_symbols, transmit
from nlcast.chunks import ChunkData, ChunkSet, ChunkStats, SideInfo, build_side_info, compute_stats, partition_chunks, reassemble, select_chunks
from nlcast.decoder import LlseFactors, decode_chunks, llse_factors
from nlcast.frame_io import FrameSequence, GopTensor, assemble_gops, load_y4m, write_y4m
from nlcast.metrics import QualityReport, mssim, psnr
from nlcast.transforms import dct3_forward, dct3_inverse, signed_power, wht_block

__version__ = "0.1.0"

__all__ = [
    "AllocationPlan", "ChannelModel", "ChunkData", "ChunkSet", "ChunkStats",
    "FrameSequence", "GopTensor", "LlseFactors", "QualityReport", "SideInfo",
    "SymbolStream", "allocate_nonlinear", "allocate_softcast", "assemble_gops",
    "build_side_info", "compute_stats", "dct3_forward", "dct3_inverse",
    "decode_chunks", "deserialize_symbols", "llse_factors", "load_y4m", "mssim",
    "noise_variance_for_snr", "partition_chunks", "predicted_distortion", "psnr",
    "reassemble", "select_chunks", "serialize_symbols", "signed_power",
    "transmit", "wht_block", "write_y4m",
]
