#!/usr/bin/env python3
"""
DRAMA CLI工具

提供数据生成、检测、调参、基准对比、评分与实验复现等功能。
结果只写入文件或标准输出，诊断信息走标准错误流。
退出码：0 成功，1 用法错误，2 数据错误，3 数值失败。
"""

import argparse
import logging
import os
import sys
from pathlib import Path
from typing import Any, List, Optional, Sequence


def setup_path():
    """设置模块路径"""
    sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))


setup_path()

from drama.base.error_category import EXIT_OK, EXIT_USAGE, ErrorCategory
from drama.base.error_collector import error_collector
from drama.base.error_exceptions import DramaError, UsageError
from drama.config import (
    ConfigValidator,
    config_manager,
    get_cli_defaults,
    get_drt_settings,
    get_experiment_config,
)
from drama.service.detector.grid import (
    ALGORITHMS,
    algorithm_grid,
    configured_settings,
)
from drama.service.detector.pipeline import (
    ReductionCache,
    run_candidate,
    run_pipeline,
)
from drama.service.detector.run_config import (
    RunConfig,
    candidate_from_id,
    parse_flag,
)
from drama.service.detector.tuning import tune_with_seen_anomalies
from drama.service.drt.model_io import save_model
from drama.service.experiments.curves import (
    aggregate,
    challenge_run,
    evaluate_dataset,
)
from drama.service.experiments.odds_suite import run_odds_suite
from drama.service.experiments.reporting import (
    axis_summary,
    figure_name,
    flatten_tables,
    format_points,
    write_axis_summary,
    write_curve_csv,
    write_suite_csv,
)
from drama.service.io.dataset_io import read_dataset, write_dataset, write_metadata
from drama.service.io.results_io import (
    read_ranking,
    write_ranking,
    write_results,
    write_score_table,
)
from drama.service.scoring.scoring import auc, rws
from drama.service.simgen.challenges import CHALLENGES, ChallengeSpec, generate

logger = logging.getLogger("drama.cli")


class CliArgumentParser(argparse.ArgumentParser):
    """参数错误抛出 UsageError 而不是直接退出"""

    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def int_list(values: Optional[Sequence[str]]) -> Optional[List[int]]:
    """同时接受 `1 2 5` 与 `1,2,5`"""
    if values is None:
        return None
    result = []
    for value in values:
        for part in str(value).split(","):
            part = part.strip()
            if not part:
                continue
            try:
                result.append(int(part))
            except ValueError:
                raise UsageError(f"无法解析为整数: {part!r}")
    return result


def name_list(value: str) -> List[str]:
    return [part.strip().lower() for part in str(value).split(",") if part.strip()]


def resolve(args, name: str, fallback: Any) -> Any:
    """命令行参数 > 配置文件 defaults > 内置默认值"""
    value = getattr(args, name, None)
    if value is not None:
        return value
    return get_cli_defaults().get(name, fallback)


def cmd_validate(args) -> int:
    """配置验证命令"""
    print(f"🔍 验证配置文件: {args.config}")
    config = config_manager.use_file(args.config)

    validator = ConfigValidator()
    validator.validate(config)
    summary = validator.get_validation_summary()

    print(f"📊 验证结果:")
    print(f"   有效性: {'✅ 通过' if summary['valid'] else '❌ 失败'}")
    print(f"   错误数: {summary['error_count']}")
    print(f"   警告数: {summary['warning_count']}")

    if summary["errors"]:
        print(f"\n❌ 错误列表:")
        for error in summary["errors"]:
            print(f"   - {error}")

    if summary["warnings"]:
        print(f"\n⚠️ 警告列表:")
        for warning in summary["warnings"]:
            print(f"   - {warning}")

    return EXIT_OK if summary["valid"] else EXIT_USAGE


def cmd_generate(args) -> int:
    """生成模拟挑战数据集与元数据"""
    scale = resolve(args, "scale", get_experiment_config().scale)
    spec = ChallengeSpec.preset(args.challenge, args.seed, scale)
    generated = generate(spec)
    out_dir = Path(args.out)
    name = generated.dataset.name
    data_path = write_dataset(generated.dataset, out_dir / f"{name}.csv")
    meta_path = write_metadata(generated, out_dir / f"{name}.json")
    print(data_path)
    print(meta_path)
    return EXIT_OK


def _detect_candidate(args):
    if args.config_id:
        return candidate_from_id(args.config_id, configured_settings())
    return RunConfig(
        drt=resolve(args, "drt", "pca"),
        metric=resolve(args, "metric", "l1"),
        n_s=int(resolve(args, "ns", 1)),
        latent_dim=int(resolve(args, "latent_dim", get_drt_settings().latent_dim)),
        decode_flag=parse_flag(resolve(args, "decode", "on")),
        seed=int(resolve(args, "seed", 0)),
        settings=configured_settings(),
    )


def cmd_detect(args) -> int:
    """单个配置打分并写出排序文件"""
    train = read_dataset(args.data)
    candidate = _detect_candidate(args)

    if isinstance(candidate, RunConfig):
        cache = ReductionCache(train.data)
        test = read_dataset(args.test).data if args.test else None
        ranking = run_pipeline(train.data, test, candidate, cache)
        if args.save_model:
            save_model(cache.get(candidate).model, args.save_model)
            logger.info(f"降维模型已保存到 {args.save_model}")
    else:
        if args.test or args.save_model:
            raise UsageError("--test 与 --save-model 只适用于 DRAMA 配置")
        ranking = run_candidate(train.data, candidate)

    write_ranking(ranking, args.out)
    logger.info(f"{candidate.config_id}: 排序已写出到 {args.out}")
    return EXIT_OK


def cmd_tune(args) -> int:
    """已见异常调参：每个种子输出最佳配置，完整分数表写入文件"""
    dataset = read_dataset(args.data)
    seeds = int_list(args.seeds) or [int(resolve(args, "seed", 0))]
    results = []
    print("seed,n_seen,config,partial_auc,full_auc,full_rws")
    for seed in seeds:
        grid = algorithm_grid(args.algorithm, dataset.data.n_d, seed)
        result = tune_with_seen_anomalies(
            dataset,
            args.n_seen,
            grid,
            seed,
            criterion=args.criterion,
            workers=args.workers,
        )
        best = result.best_row
        print(
            f"{seed},{result.n_seen},{best.config_id},{best.partial_auc!r},"
            f"{best.full_auc!r},{best.full_rws!r}"
        )
        results.append(result)
    write_score_table(results, args.out)
    return EXIT_OK


def cmd_benchmark(args) -> int:
    """多算法、多次重复的对比；输出结果行并打印均值/最佳汇总"""
    dataset = read_dataset(args.data)
    algorithms = name_list(args.algos)
    unknown = [a for a in algorithms if a not in ALGORITHMS]
    if not algorithms or unknown:
        raise UsageError(
            f"算法列表无效: {args.algos}，可选: {', '.join(ALGORITHMS)}"
        )
    if args.repeats < 1:
        raise UsageError(f"--repeats 必须 >= 1: {args.repeats}")

    base_seed = int(resolve(args, "seed", 0))
    rows = []
    for seed in range(base_seed, base_seed + args.repeats):
        run = evaluate_dataset(
            dataset,
            [args.n_seen],
            seed,
            algorithms,
            workers=args.workers,
            record_time=args.record_time or None,
        )
        rows.extend(run.rows)
    write_results(rows, args.out, append=args.append)
    print(format_points(aggregate(rows)))
    return EXIT_OK


def cmd_score(args) -> int:
    """按数据集标签评估排序文件"""
    dataset = read_dataset(args.data)
    if dataset.labels is None:
        raise UsageError(f"{args.data} 没有 label 列，无法评分")
    scores, order = read_ranking(args.ranking)
    print(
        f"auc={auc(scores, dataset.labels)!r},"
        f"rws={rws(order, dataset.labels, paper_scale=args.paper_scale)!r}"
    )
    return EXIT_OK


def _experiment_lists(args):
    experiment = get_experiment_config()
    seeds = int_list(args.seeds) or list(experiment.seeds)
    n_seen = int_list(args.n_seen) or list(experiment.n_seen)
    return seeds, n_seen


def cmd_curve(args) -> int:
    """模拟挑战曲线：results.csv、fig4/fig5.csv 与按轴汇总"""
    seeds, n_seen = _experiment_lists(args)
    scale = resolve(args, "scale", get_experiment_config().scale)
    out_dir = Path(args.out)

    rows, tables, figures = [], [], {}
    for challenge in args.challenges:
        run = challenge_run(
            challenge,
            n_seen,
            seeds,
            scale,
            workers=args.workers,
            record_time=args.record_time or None,
        )
        rows.extend(run.rows)
        tables.extend(run.tables)
        points = aggregate(run.rows)
        figures.setdefault(figure_name(challenge), {})[challenge] = points
        print(f"# {challenge}")
        print(format_points(points))

    write_results(rows, out_dir / "results.csv")
    for name, curves in figures.items():
        write_curve_csv(curves, out_dir / name)
    write_axis_summary(
        axis_summary(flatten_tables(tables)), out_dir / "axis_summary.csv"
    )
    return EXIT_OK


def cmd_suite(args) -> int:
    """真实数据套件：results.csv、fig6.csv、胜场统计与按轴汇总"""
    seeds, n_seen = _experiment_lists(args)
    out_dir = Path(args.out)
    result = run_odds_suite(
        args.data_dir,
        seeds,
        n_seen,
        workers=args.workers,
        record_time=args.record_time or None,
    )
    write_results(result.rows, out_dir / "results.csv")
    write_suite_csv(result.rows, out_dir / "fig6.csv")
    write_axis_summary(
        axis_summary(flatten_tables(result.tables)), out_dir / "axis_summary.csv"
    )
    print("dataset,winner")
    for dataset, winner in result.winners.items():
        print(f"{dataset},{winner}")
    print(result.summary())
    return EXIT_OK


def build_parser() -> CliArgumentParser:
    parser = CliArgumentParser(
        prog="cli_tools.py",
        description="DRAMA CLI工具",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
示例用法:
  # 生成 desk 规模的 C-Ia 数据集
  python cli_tools.py generate --challenge c1a --seed 7 --out data/

  # 单个配置检测
  python cli_tools.py detect --data data/c1a-k7-seed7.csv --drt pca --metric l1 --ns 1 --decode on --out ranking.csv

  # 评估排序
  python cli_tools.py score --ranking ranking.csv --data data/c1a-k7-seed7.csv

  # 已见异常调参
  python cli_tools.py tune --data data/c1a-k7-seed7.csv --n-seen 5 --seeds 0 1 2 --out table.csv

  # 基准对比
  python cli_tools.py benchmark --data data/c1a-k7-seed7.csv --algos drama,lof,iforest --repeats 5 --out results.csv

  # 复现曲线 / 真实数据套件
  python cli_tools.py curve --challenges c1a c2a --out out/
  python cli_tools.py suite --data-dir odds/ --seeds 0 1 2 --out out/
        """,
    )
    parser.add_argument(
        "--config", "-c", default="config.yaml", help="配置文件路径 (默认: config.yaml)"
    )
    parser.add_argument("--verbose", "-v", action="store_true", help="显示详细信息")
    parser.add_argument(
        "--workers", type=int, default=None, help="并行度上限 (默认: 配置/CPU 核数)"
    )

    subparsers = parser.add_subparsers(dest="command", help="可用命令")

    subparsers.add_parser("validate", help="验证配置文件")

    gen = subparsers.add_parser("generate", help="生成模拟挑战数据集")
    gen.add_argument("--challenge", required=True, choices=CHALLENGES)
    gen.add_argument("--seed", type=int, required=True)
    gen.add_argument("--out", required=True, help="输出目录")
    gen.add_argument("--scale", choices=("desk", "paper"), default=None)

    detect = subparsers.add_parser("detect", help="单个配置检测并写出排序")
    detect.add_argument("--data", required=True)
    detect.add_argument("--drt", default=None)
    detect.add_argument("--metric", default=None)
    detect.add_argument("--ns", type=int, default=None)
    detect.add_argument("--decode", default=None, help="on/off")
    detect.add_argument("--seed", type=int, default=None)
    detect.add_argument("--latent-dim", dest="latent_dim", type=int, default=None)
    detect.add_argument(
        "--config-id", dest="config_id", default=None, help="直接给出配置标识（含 lof/iforest）"
    )
    detect.add_argument("--test", default=None, help="归纳模式下的测试集 CSV")
    detect.add_argument("--save-model", dest="save_model", default=None)
    detect.add_argument("--out", required=True)

    tune = subparsers.add_parser("tune", help="已见异常调参")
    tune.add_argument("--data", required=True)
    tune.add_argument("--n-seen", dest="n_seen", type=int, required=True)
    tune.add_argument("--seeds", nargs="+", default=None)
    tune.add_argument("--algorithm", choices=ALGORITHMS, default="drama")
    tune.add_argument("--criterion", choices=("auc", "rws"), default="auc")
    tune.add_argument("--out", required=True)

    bench = subparsers.add_parser("benchmark", help="多算法对比")
    bench.add_argument("--data", required=True)
    bench.add_argument("--algos", default=",".join(ALGORITHMS))
    bench.add_argument("--repeats", type=int, default=1)
    bench.add_argument("--n-seen", dest="n_seen", type=int, default=5)
    bench.add_argument("--seed", type=int, default=None, help="首个种子")
    bench.add_argument("--record-time", dest="record_time", action="store_true")
    bench.add_argument("--append", action="store_true", help="追加到已有结果文件")
    bench.add_argument("--out", required=True)

    score = subparsers.add_parser("score", help="评估排序文件")
    score.add_argument("--ranking", required=True)
    score.add_argument("--data", required=True)
    score.add_argument(
        "--paper-scale", dest="paper_scale", action="store_true", help="RWS 满分为 1/2"
    )

    curve = subparsers.add_parser("curve", help="模拟挑战曲线")
    curve.add_argument("--challenges", nargs="+", choices=CHALLENGES, required=True)
    curve.add_argument("--seeds", nargs="+", default=None)
    curve.add_argument("--n-seen", dest="n_seen", nargs="+", default=None)
    curve.add_argument("--scale", choices=("desk", "paper"), default=None)
    curve.add_argument("--record-time", dest="record_time", action="store_true")
    curve.add_argument("--out", required=True, help="输出目录")

    suite = subparsers.add_parser("suite", help="真实数据套件")
    suite.add_argument("--data-dir", dest="data_dir", required=True)
    suite.add_argument("--seeds", nargs="+", default=None)
    suite.add_argument("--n-seen", dest="n_seen", nargs="+", default=None)
    suite.add_argument("--record-time", dest="record_time", action="store_true")
    suite.add_argument("--out", required=True, help="输出目录")

    return parser


COMMANDS = {
    "validate": cmd_validate,
    "generate": cmd_generate,
    "detect": cmd_detect,
    "tune": cmd_tune,
    "benchmark": cmd_benchmark,
    "score": cmd_score,
    "curve": cmd_curve,
    "suite": cmd_suite,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    """主函数，返回退出码"""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as e:
        logger.error(str(e))
        return EXIT_USAGE
    except SystemExit as e:
        return int(e.code or 0)

    if not args.command:
        parser.print_help(sys.stderr)
        return EXIT_USAGE

    if args.verbose:
        logging.getLogger().setLevel(logging.DEBUG)
    if args.command != "validate":
        config_manager.use_file(args.config)

    try:
        code = COMMANDS[args.command](args)
    except DramaError as e:
        code = ErrorCategory.get_exit_code(e)
        error_collector.record_error(e, f"cli:{args.command}")
        logger.error(f"{args.command} 失败: {e}")
    except Exception as e:
        code = ErrorCategory.get_exit_code(e)
        error_collector.record_error(e, f"cli:{args.command}")
        logger.exception(f"{args.command} 出现未预期的错误: {e}")

    if args.verbose:
        summary = error_collector.get_error_summary()
        if summary["total_errors"]:
            logger.info(f"错误统计: {summary['error_counts']}")
    return code


if __name__ == "__main__":
    sys.exit(main())
