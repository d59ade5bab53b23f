import argparse
import sys
import warnings

import yaml

from negotiable_qos import VERSION
from negotiable_qos.config import REPORT_FORMATS, RunConfiguration, load_config
from negotiable_qos.errors import ConfigError, QoSEngineError
from negotiable_qos.file_utils import parse_goal_flag, read_goal_files, read_records, write_records
from negotiable_qos.services.benchmark import run_scale_benchmark
from negotiable_qos.services.logger import Logger
from negotiable_qos.services.model_loader import load_model, load_scenario
from negotiable_qos.services.policy_compiler import activate_policies
from negotiable_qos.services.report import (benchmark_record, render_benchmark, render_records, render_table,
                                            render_trace_table, report_records)
from negotiable_qos.services.simulator import ScenarioRunner


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="negotiable_qos",
        description=f"Negotiable QoS {VERSION} - goal-driven variant selection with runtime re-estimation",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  python -m negotiable_qos compile --model fixtures/routeplanner/model.yaml --goals conditional=fixtures/routeplanner/goals/conditional.txt
  python -m negotiable_qos run --model fixtures/routeplanner/model.yaml --scenario fixtures/routeplanner/setting2.yaml --out trace.jsonl
  python -m negotiable_qos bench --variants 200 --params 20 --requests 300 --issuers 5
  python -m negotiable_qos trace-dump trace.jsonl

Exit codes: 0 success, 1 configuration, 2 goal parse, 3 goal resolve/compile,
            4 model/scenario, 5 no eligible variant
        """
    )
    subparsers = parser.add_subparsers(dest="command", required=True)

    def add_inputs(sub):
        sub.add_argument("--config", help="Path to YAML run configuration")
        sub.add_argument("--model", help="Path to the model file")
        sub.add_argument("--goals", action="append", default=[], metavar="USER=PATH",
                         help="Goal file for one user (repeatable)")

    compile_parser = subparsers.add_parser("compile", help="Compile goals into selection policies")
    add_inputs(compile_parser)

    run_parser = subparsers.add_parser("run", help="Replay a scenario and report the selections")
    add_inputs(run_parser)
    run_parser.add_argument("--scenario", help="Path to the scenario file")
    run_parser.add_argument("--seed", type=int, help="Seed for stochastic behaviors (default 0)")
    run_parser.add_argument("--out", help="Write line-delimited trace records to this file")
    run_parser.add_argument("--report", choices=REPORT_FORMATS, help="Report rendering (default table)")
    run_parser.add_argument("--dump-detector", action="store_true",
                            help="Append detector state transitions to the trace output")

    bench_parser = subparsers.add_parser("bench", help="Measure selection latency on a synthetic model")
    bench_parser.add_argument("--variants", type=int, default=200)
    bench_parser.add_argument("--params", type=int, default=20)
    bench_parser.add_argument("--requests", type=int, default=300)
    bench_parser.add_argument("--issuers", type=int, default=5)
    bench_parser.add_argument("--seed", type=int, default=0)
    bench_parser.add_argument("--report", choices=REPORT_FORMATS, default="table")

    dump_parser = subparsers.add_parser("trace-dump", help="Render a trace file as a table")
    dump_parser.add_argument("trace", help="Trace file written by 'run --out'")
    dump_parser.add_argument("--user", help="Only show selections for this user")
    return parser


def _run_configuration(args) -> RunConfiguration:
    config = load_config(args.config) if args.config else None
    goal_paths = dict(parse_goal_flag(flag) for flag in args.goals)
    overrides = {
        "model_path": args.model,
        "goal_paths": goal_paths,
        "scenario_path": getattr(args, "scenario", None),
        "seed": getattr(args, "seed", None),
        "output_path": getattr(args, "out", None),
        "report_format": getattr(args, "report", None),
    }
    run_config = RunConfiguration.from_sources(config, overrides)
    Logger.configure(run_config.std_log_path, run_config.err_log_path)
    return run_config


def cmd_compile(args) -> int:
    run_config = _run_configuration(args)
    model, inline = load_model(run_config.model_path)
    goal_texts = dict(inline)
    goal_texts.update(read_goal_files(run_config.goal_paths))
    if not goal_texts:
        raise ConfigError("No goals given (use --goals user=path or a 'goals' section in the model).")
    policies = activate_policies(goal_texts, model)
    documents = [policy.to_document() for policy in policies.values()]
    print(yaml.safe_dump_all(documents, sort_keys=False, default_flow_style=False), end="")
    return 0


def cmd_run(args) -> int:
    run_config = _run_configuration(args)
    if not run_config.scenario_path:
        raise ConfigError("A scenario file is required (--scenario or 'scenario' in the config file).")
    model, model_goals = load_model(run_config.model_path)
    scenario = load_scenario(run_config.scenario_path)
    if args.dump_detector:
        scenario.record_detector = True
    goal_texts = dict(model_goals)
    goal_texts.update(scenario.goals)
    goal_texts.update(read_goal_files(run_config.goal_paths))
    if not goal_texts:
        raise ConfigError("No goals given (use --goals user=path or a 'goals' section).")

    policies = activate_policies(goal_texts, model)
    result = ScenarioRunner(model, policies, scenario, run_config.seed).run()

    if run_config.output_path:
        records = [trace.to_record() for trace in result.traces] + result.detector_records
        written = write_records(run_config.output_path, records)
        Logger.get_instance().log_action("TRACE_WRITTEN", f"{written} records to {run_config.output_path}")
    if run_config.report_format == "records":
        print(render_records(report_records(result.report)))
    else:
        print(render_table(result.report, model.catalog))
    return 0


def cmd_bench(args) -> int:
    report = run_scale_benchmark(args.variants, args.params, args.requests, args.issuers, args.seed)
    if args.report == "records":
        print(render_records([benchmark_record(report)]))
    else:
        print(f"\n⏱️  Selection benchmark:")
        print(render_benchmark(report))
    return 0


def cmd_trace_dump(args) -> int:
    print(render_trace_table(read_records(args.trace), user=args.user))
    return 0


COMMANDS = {
    "compile": cmd_compile,
    "run": cmd_run,
    "bench": cmd_bench,
    "trace-dump": cmd_trace_dump,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logger = Logger.get_instance()
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("default")
            return COMMANDS[args.command](args)
    except QoSEngineError as e:
        print(f"❌ {e.family}: {e}", file=sys.stderr)
        logger.log_error(str(e), e.family)
        return e.exit_code
    except (ValueError, OSError) as e:
        print(f"❌ Error: {e}", file=sys.stderr)
        logger.log_error(str(e), "Error")
        return 1
    except Exception as e:
        print(f"❌ Unexpected error: {e}", file=sys.stderr)
        logger.log_error(str(e), "Unexpected Error")
        return 1


if __name__ == "__main__":
    sys.exit(main())
