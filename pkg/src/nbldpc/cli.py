"""Command-line entry point for Monte-Carlo decoding campaigns."""

from __future__ import annotations

import argparse
import os
import sys as _sys

from .campaign import CampaignConfig, run_campaign
from .padmm import DecoderConfig

SEED_ENV_VAR = "NBLDPC_SEED"


def _parse_snr_list(tokens) -> list:
    vals = []
    for tok in tokens:
        for part in tok.replace(",", " ").split():
            vals.append(float(part))
    return vals


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="decode-campaign",
        description="Seeded FER/SER campaign for the proximal-ADMM nonbinary LDPC decoder.",
    )
    ap.add_argument("--code", required=True, help="path to the parity-check matrix (alist)")
    ap.add_argument("--values", help="coefficient file for binary alist input")
    ap.add_argument("--q", type=int, required=True, help="field extension degree (GF(2^q))")
    ap.add_argument("--embedding", choices=["flanagan", "cw"], default="flanagan")
    ap.add_argument("--mod", choices=["qpsk", "8psk", "16qam"], required=True)
    ap.add_argument("--snr", nargs="+", required=True, help="Es/N0 points in dB (space or comma separated)")
    ap.add_argument("--mu", type=float, default=0.6)
    ap.add_argument("--alpha", type=float, default=0.5)
    ap.add_argument("--rho", type=float, default=0.52)
    ap.add_argument("--beta", type=float, default=0.9)
    ap.add_argument("--tmax", type=int, default=500)
    ap.add_argument("--xi", type=float, default=1e-5)
    ap.add_argument("--min-errors", type=int, default=200)
    ap.add_argument("--max-frames", type=int, default=1_000_000)
    ap.add_argument("--seed", type=int, default=None, help=f"overrides ${SEED_ENV_VAR}")
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--transmit", choices=["zeros", "random"], default="zeros")
    ap.add_argument("--out", help="output path; .csv or .json selects the format (default: CSV to stdout)")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    seed = args.seed
    if seed is None:
        env = os.environ.get(SEED_ENV_VAR)
        seed = int(env) if env else 0

    try:
        from .code import parse_alist_file

        mat = parse_alist_file(args.code, q=args.q, values_path=args.values)
        cfg = CampaignConfig(
            code=mat,
            q=args.q,
            embedding=args.embedding,
            modulation=args.mod,
            snr_db=_parse_snr_list(args.snr),
            decoder=DecoderConfig(
                mu=args.mu, alpha=args.alpha, rho=args.rho, beta=args.beta, t_max=args.tmax, xi=args.xi
            ),
            min_error_frames=args.min_errors,
            max_frames=args.max_frames,
            master_seed=seed,
            workers=args.workers,
            transmit=args.transmit,
        )
        result = run_campaign(cfg)
    except (ValueError, OSError) as exc:
        print(f"decode-campaign: {exc}", file=_sys.stderr)
        return 2
    result.config["code"] = args.code

    if args.out is None:
        _sys.stdout.write(result.csv_text())
        return 0
    if args.out.endswith(".json"):
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(result.to_json())
            fh.write("\n")
    elif args.out.endswith(".csv"):
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            result.to_csv(fh)
    else:
        print("decode-campaign: --out must end in .csv or .json", file=_sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
