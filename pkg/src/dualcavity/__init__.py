"""Dual-symmetric cavity field quantization toolkit."""
