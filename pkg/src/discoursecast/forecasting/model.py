"""Encoder-decoder transformer emitting Student-t parameters per step.

The encoder ingests the context window (selected features plus target
lags); the decoder ingests only the known future covariates (calendar and
key-event indicators) and cross-attends to the encoder memory, emitting
all horizon steps in one pass. Three heads per target produce location,
scale, and degrees-of-freedom pre-activations; softplus maps keep scale
positive and degrees of freedom above 2. The module runs in float64 so
checkpoints round-trip bit-exactly.
"""

from __future__ import annotations

import math

import torch
import torch.nn as nn
import torch.nn.functional as F

from .studentt import NU_FLOOR


class SinusoidalPositions(nn.Module):
    def __init__(self, d_model: int, max_len: int = 512):
        super().__init__()
        position = torch.arange(max_len, dtype=torch.float64).unsqueeze(1)
        div = torch.exp(
            torch.arange(0, d_model, 2, dtype=torch.float64) * (-math.log(10000.0) / d_model)
        )
        table = torch.zeros(max_len, d_model, dtype=torch.float64)
        table[:, 0::2] = torch.sin(position * div)
        table[:, 1::2] = torch.cos(position * div)
        self.register_buffer("table", table)

    def forward(self, start: int, length: int) -> torch.Tensor:
        return self.table[start : start + length]


class DiscourseTransformer(nn.Module):
    def __init__(
        self,
        enc_in: int,
        cov_in: int,
        n_targets: int,
        d_model: int = 64,
        heads: int = 4,
        encoder_layers: int = 2,
        decoder_layers: int = 2,
        ff_dim: int = 128,
        dropout: float = 0.3,
        max_len: int = 512,
    ):
        super().__init__()
        self.enc_in = enc_in
        self.cov_in = cov_in
        self.n_targets = n_targets
        self.enc_proj = nn.Linear(enc_in, d_model)
        self.dec_proj = nn.Linear(cov_in, d_model)
        self.positions = SinusoidalPositions(d_model, max_len)
        self.drop = nn.Dropout(dropout)
        enc_layer = nn.TransformerEncoderLayer(
            d_model, heads, ff_dim, dropout, batch_first=True, norm_first=True
        )
        self.encoder = nn.TransformerEncoder(enc_layer, encoder_layers, enable_nested_tensor=False)
        dec_layer = nn.TransformerDecoderLayer(
            d_model, heads, ff_dim, dropout, batch_first=True, norm_first=True
        )
        self.decoder = nn.TransformerDecoder(dec_layer, decoder_layers)
        self.head = nn.Linear(d_model, n_targets * 3)
        self.double()

    def forward(self, ctx: torch.Tensor, fut_cov: torch.Tensor):
        """ctx: (B, L, enc_in); fut_cov: (B, H, cov_in).

        Returns (loc, scale, df), each (B, H, n_targets), in standardized
        target units.
        """
        context_len = ctx.shape[1]
        horizon = fut_cov.shape[1]
        enc = self.enc_proj(ctx) + self.positions(0, context_len)
        memory = self.encoder(self.drop(enc))
        dec = self.dec_proj(fut_cov) + self.positions(context_len, horizon)
        decoded = self.decoder(self.drop(dec), memory)
        raw = self.head(decoded).reshape(-1, horizon, self.n_targets, 3)
        loc = raw[..., 0]
        scale = F.softplus(raw[..., 1]) + 1e-8
        df = NU_FLOOR + F.softplus(raw[..., 2]) + 1e-8
        return loc, scale, df
