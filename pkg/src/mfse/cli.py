"""Command-line front end.

Subcommands:
  enhance       noisy WAV in, enhanced WAV out
  mix           mix clean speech and noise at a target SNR
  oracle-masks  ideal speech/noise masks from the true components
  eval          fwsSNR / segSNR report against a clean reference
  dump-spp      model-based SPP grid as a mask file (speech plane)
"""

import argparse
import sys

import numpy as np

from . import masks as maskio
from . import metrics, pipeline, wavio
from .spp import MaskGrid
from .stft import SpectrogramGrid, analyze


def _load_cfg(args):
    cfg = pipeline.load_config(args.config) if args.config else pipeline.EnhanceConfig()
    if getattr(args, "filter", None):
        cfg.filter = args.filter
    if getattr(args, "spp", None):
        cfg.spp_source = args.spp.replace("-", "_")
    return cfg


def _read_utt(path, expect_rate=16000):
    samples, rate = wavio.read_wav(path, expect_rate=expect_rate)
    return pipeline.Utterance(samples, rate, id=path)


def cmd_enhance(args):
    cfg = _load_cfg(args)
    noisy = _read_utt(args.infile, cfg.stft.sample_rate)
    mask_grid = None
    if cfg.spp_source != "model":
        if not args.masks:
            raise SystemExit(f"--spp {args.spp} requires --masks")
        mask_grid, _ = maskio.read_masks(args.masks, expect_cfg=cfg.stft)
    out, stats = pipeline.enhance(noisy, cfg, mask_grid, return_stats=True)
    wavio.write_wav(args.out, out.samples, out.sample_rate)
    if stats["fallbacks"]:
        print(f"warning: {stats['fallbacks']} frames passed through unfiltered", file=sys.stderr)


def cmd_mix(args):
    clean = _read_utt(args.clean)
    noise = _read_utt(args.noise)
    noisy, noise_used = pipeline.mix_at_snr(clean, noise, args.snr, args.seed)
    wavio.write_wav(args.out, noisy.samples, noisy.sample_rate)
    if args.noise_out:
        wavio.write_wav(args.noise_out, noise_used.samples, noise_used.sample_rate)


def cmd_oracle_masks(args):
    cfg = pipeline.EnhanceConfig()
    clean = _read_utt(args.clean, cfg.stft.sample_rate)
    noise = _read_utt(args.noise, cfg.stft.sample_rate)
    if clean.samples.size != noise.samples.size:
        raise SystemExit("clean and noise must be equally long (use the mix output)")
    from .spp import ideal_masks

    grid = ideal_masks(
        analyze(clean.samples, cfg.stft), analyze(noise.samples, cfg.stft)
    )
    maskio.write_masks(args.out, grid, cfg.stft)


def cmd_eval(args):
    mcfg = metrics.MetricConfig()
    clean = _read_utt(args.clean)
    enhanced = _read_utt(args.enhanced)
    noisy = _read_utt(args.noisy) if args.noisy else enhanced
    row = {
        "id": args.id or args.enhanced,
        "snr": args.snr,
        "method": args.method,
        "fwssnr_in": metrics.fwssnr(clean.samples, noisy.samples, mcfg),
        "fwssnr_out": metrics.fwssnr(clean.samples, enhanced.samples, mcfg),
        "segsnr_in": metrics.segsnr(clean.samples, noisy.samples, mcfg),
        "segsnr_out": metrics.segsnr(clean.samples, enhanced.samples, mcfg),
    }
    print(metrics.format_table([row]))
    if args.report:
        metrics.write_report(args.report, [row])


def cmd_dump_spp(args):
    cfg = pipeline.EnhanceConfig()
    noisy = _read_utt(args.infile, cfg.stft.sample_rate)
    grid = analyze(noisy.samples, cfg.stft)
    _, spp, _ = pipeline.enhance_grid(grid, cfg)
    maskio.write_masks(args.out, MaskGrid(spp, 1.0 - spp), cfg.stft)


def build_parser():
    parser = argparse.ArgumentParser(prog="mfse", description=__doc__.strip().splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("enhance", help="enhance a noisy WAV file")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--filter", choices=("mfmvdr", "mfmpdr"), default=None)
    p.add_argument("--spp", choices=("model", "mask-n1", "mask-n2"), default=None)
    p.add_argument("--masks", default=None, help="mask file for mask-based SPP")
    p.add_argument("--config", default=None, help="key=value parameter file")
    p.set_defaults(func=cmd_enhance)

    p = sub.add_parser("mix", help="mix clean speech with noise at a target SNR")
    p.add_argument("--clean", required=True)
    p.add_argument("--noise", required=True)
    p.add_argument("--snr", type=float, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.add_argument("--noise-out", default=None, help="also write the scaled noise realization")
    p.set_defaults(func=cmd_mix)

    p = sub.add_parser("oracle-masks", help="ideal masks from true clean/noise components")
    p.add_argument("--clean", required=True)
    p.add_argument("--noise", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_oracle_masks)

    p = sub.add_parser("eval", help="score an enhanced file against its clean reference")
    p.add_argument("--clean", required=True)
    p.add_argument("--enhanced", required=True)
    p.add_argument("--report", default=None, help="write a JSON report here")
    p.add_argument("--noisy", default=None, help="unprocessed mixture for the *_in columns")
    p.add_argument("--id", default=None)
    p.add_argument("--snr", type=float, default=None)
    p.add_argument("--method", default=None)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("dump-spp", help="write the model-based SPP grid as a mask file")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_dump_spp)

    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except (ValueError, OSError) as exc:
        raise SystemExit(f"error: {exc}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
