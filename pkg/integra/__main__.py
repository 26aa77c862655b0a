"""
Start Function
==============
After installing integra it is possible to use it directly from the command line:

    $ integra gen --n 3 --kappa 2 --seed 1 --out market.mkt
    $ integra solve --market-file market.mkt --population 0,1
    $ integra verify --market-file integra/core/defaults/fixtures/prop1_2x2.mkt
    $ integra table1 --runs 100 --workers 4 --out table1.csv

gen, solve and verify print JSON; the campaigns (table1, table2, table3, figure1) write their aggregates as csv, json
lines or nc. Any integra error, a rejected argument included, exits with code 2 and a one line JSON object on
stderr.
"""
import argparse
import json
import logging
import os
import sys

import integra
from integra.core.base.tools import read_config
from integra.core.errors import IntegraError, InvalidArgumentError, OracleSizeError
from integra.core.market import Population, Side
from integra.core.market_file import dump_market, format_market, load_market
from integra.controller.random_markets import SWAP_MODES, MarketSpec, generate
from integra.model.campaign_model import CAMPAIGNS, FORMATS, CampaignOperator, output_format
from integra.model.deferred_acceptance import man_optimal_stable_matching, mosm_scheme
from integra.model.scheme_properties import (hurt_partition, is_im, is_pareto_scheme, is_stable_scheme, is_wim,
                                             partner_rescue_violations)

logger = logging.getLogger('integra')

EXIT_ERROR = 2


def _int_list(text):
    try:
        return [int(x) for x in text.split(',') if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f'expected comma separated integers, not {text!r}') from None


def _positive_int(text):
    try:
        value = int(text)
    except ValueError:
        value = 0
    if value < 1:
        raise argparse.ArgumentTypeError(f'expected a positive integer, not {text!r}')
    return value


def _float_list(text):
    try:
        return [float(x) for x in text.split(',') if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f'expected comma separated numbers, not {text!r}') from None


class IntegraArgumentParser(argparse.ArgumentParser):
    """Reports usage errors like every other integra error: one line of JSON on stderr and exit code 2."""

    def error(self, message):
        sys.stderr.write(json.dumps({'error': 'InvalidArgumentError', 'message': f'{self.prog}: {message}'}) + '\n')
        self.exit(EXIT_ERROR)


def build_parser():
    parser = IntegraArgumentParser(prog='integra',
                                   description='Stable matching when communities integrate.')
    parser.add_argument('--version', action='version', version=f'%(prog)s {integra.__version__}')
    commands = parser.add_subparsers(dest='command', required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--verbose', '-v', action='store_true', help='debug logging')

    gen = commands.add_parser('gen', parents=[common], help='write a random market file')
    gen.add_argument('--n', type=int, required=True, help='men and women per community')
    gen.add_argument('--kappa', type=int, required=True, help='number of communities')
    gen.add_argument('--rho', type=float, default=None, help='correlation with a status quo (default: uniform)')
    gen.add_argument('--seed', type=int, default=0)
    gen.add_argument('--swap-mode', choices=SWAP_MODES, default='disjoint',
                     help='transpositions of a correlated list: disjoint (exactly c positions differ) or overlapping')
    gen.add_argument('--out', default=None, help='market file to write (default: stdout)')

    solve = commands.add_parser('solve', parents=[common], help='man-optimal stable matching of a market file')
    solve.add_argument('--market-file', required=True)
    solve.add_argument('--population', type=_int_list, default=None,
                       help='comma separated communities (default: the society)')

    verify = commands.add_parser('verify', parents=[common],
                                 help='properties of the man-optimal stable scheme of a market file')
    verify.add_argument('--market-file', required=True)

    for name in CAMPAIGNS:
        campaign = commands.add_parser(name, parents=[common], help=f'run the {name} campaign')
        campaign.add_argument('--n', type=_int_list, default=None, help='comma separated n values')
        campaign.add_argument('--kappa', type=_int_list, default=None, help='comma separated kappa values')
        campaign.add_argument('--rho', type=_float_list, default=None, help='comma separated rho values (0: uniform)')
        campaign.add_argument('--runs', type=_positive_int, default=None, help='runs per cell')
        campaign.add_argument('--seed', type=int, default=None, help='master seed')
        campaign.add_argument('--swap-mode', choices=SWAP_MODES, default=None,
                              help='transpositions of correlated lists (default: the config, else disjoint)')
        campaign.add_argument('--workers', type=_positive_int, default=None,
                              help='worker processes (default: INTEGRA_WORKERS or the config)')
        campaign.add_argument('--out', default=None, help='aggregate file (default: stdout)')
        campaign.add_argument('--format', choices=sorted(FORMATS), default=None,
                              help='output format (default: from --out, else csv)')
        campaign.add_argument('--records', default=None, help='also write the run records to this file')
        campaign.add_argument('--config', default=None, help='campaign yaml file')
        campaign.add_argument('--full', action='store_true', help='large grid and runs (n up to 500, 10000 figure runs)')
        campaign.add_argument('--store-config', action='store_true',
                              help='write the campaign properties next to the output')
    return parser


def _print_json(data):
    print(json.dumps(data, indent=2))


def command_gen(args):
    market = generate(MarketSpec(args.n, args.kappa, args.rho or None, args.seed, args.swap_mode))
    if args.out:
        dump_market(market, args.out)
    else:
        sys.stdout.write(format_market(market))


def command_solve(args):
    market = load_market(args.market_file)
    population = Population(frozenset(args.population)) if args.population else market.society
    result = man_optimal_stable_matching(market, population)
    _print_json({
        'population': str(population),
        'matching': [[str(m), str(w)] for m, w in result.matching.sorted_pairs],
        'total_proposals': result.total_proposals,
        'proposals_per_man': {str(m): k for m, k in sorted(result.proposals_per_man.items())},
    })


def command_verify(args):
    market = load_market(args.market_file)
    scheme = mosm_scheme(market)
    report = {'kappa': market.kappa, 'stable': _verdict(is_stable_scheme(scheme)), 'wim': _verdict(is_wim(scheme))}
    for name, check in (('im', is_im), ('pareto', is_pareto_scheme)):
        try:
            report[name] = _verdict(check(scheme))
        except OracleSizeError as e:
            logger.warning(f'{name} skipped: {e}')
            report[name] = None
    try:
        partition = hurt_partition(scheme)
    except IntegraError as e:
        logger.warning(f'no hurt partition: {e}')
    else:
        segregated = [scheme.community_matching(c) for c in range(market.kappa)]
        report['hurt_partition'] = {
            'same': len(partition.same), 'better': len(partition.better), 'worse': len(partition.worse),
            'worse_men': len(partition.worse_on(Side.MAN)), 'worse_women': len(partition.worse_on(Side.WOMAN)),
            'frac_worse': partition.fraction_worse,
            'rescue_violations': [str(x) for x in partner_rescue_violations(partition, segregated)],
        }
    _print_json(report)


def _verdict(verdict):
    return {'holds': verdict.holds, 'witness': None if verdict.witness is None else str(verdict.witness)}


def _in_directory(filename, directory):
    """Relative paths are taken relative to the configured output directory."""
    if filename is None or os.path.isabs(filename):
        return filename
    return os.path.join(directory, filename)


def command_campaign(args):
    output = read_config()[0].get('output') or {}
    directory = output.get('directory') or '.'
    out, records = _in_directory(args.out, directory), _in_directory(args.records, directory)
    store_conf = args.store_config or bool(output.get('store_config'))
    fmt = args.format or (output_format(out, output.get('format', 'csv')) if out else 'csv')
    if fmt == 'nc' and not out:
        raise InvalidArgumentError('nc output needs --out')
    with CampaignOperator(args.command) as operator:
        operator.load_config(args.config, full=args.full)
        aggregates = operator.do_scan({'n': args.n, 'kappa': args.kappa, 'rho': args.rho, 'runs': args.runs,
                                       'seed': args.seed, 'swap_mode': args.swap_mode}, workers=args.workers)
        if out:
            operator.save_scan(out, fmt, records_filename=records, store_conf=store_conf)
        else:
            if records:
                operator.write(operator.records, records, fmt)
            if fmt == 'json':
                sys.stdout.write(aggregates.to_json(orient='records', lines=True))
            else:
                sys.stdout.write(aggregates.to_csv(index=False))


COMMANDS = {'gen': command_gen, 'solve': command_solve, 'verify': command_verify}


def main(argv=None):
    """Entry point of the integra command. Returns the exit code."""
    args = build_parser().parse_args(argv)
    if args.verbose:
        logging.getLogger().setLevel(logging.DEBUG)
    try:
        COMMANDS.get(args.command, command_campaign)(args)
    except IntegraError as e:
        sys.stderr.write(json.dumps({'error': type(e).__name__, 'message': str(e)}) + '\n')
        return EXIT_ERROR
    return 0


if __name__ == "__main__":
    sys.exit(main())
