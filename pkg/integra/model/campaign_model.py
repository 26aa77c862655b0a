"""
==============
Campaign Model
==============

The Operator behind ``integra table1|table2|table3|figure1``: a Monte Carlo campaign over a grid of cells
(n, kappa, rho). Every run of a cell draws a random market, computes the man-optimal stable matching inside every
community and on the society, and records what integration does to every agent (a RunRecord). Records of a cell are
aggregated into mean, per-run standard deviation and standard error of every reported column.

- Runs are independent tasks for a WorkerPool; the market of a run is a function of (master seed, cell, run) only,
  so the records do not depend on the number of workers.
- A run that breaks a property every stable scheme has (more than half of the society worse off, or a hurt agent
  whose segregated partner does not gain) raises InvariantViolation. A failing cell is logged and skipped, the
  campaign goes on.
- Output: csv, json (one object per line) or nc (xarray, netCDF), optionally with the properties in a yaml file.

Example usage can be found at the bottom of the file under if __name__=='__main___'
"""
import datetime
import logging
import math
import os.path
from dataclasses import dataclass
from itertools import product

import pandas as pd
import xarray as xr
import yaml

from integra.core.base.general_worker import WorkerPool
from integra.core.base.operator_base import OperatorBase
from integra.core.base.tools import default_workers, read_config
from integra.core.errors import InvalidArgumentError, InvariantViolation
from integra.core.market import Side
from integra.controller.random_markets import MarketSpec, RandomMarketController, spearman_to_status_quo
from integra.model.analytics import IntegrationStats, asymptotic_gains, integration_stats, normalised_loss
from integra.model.deferred_acceptance import segregated_and_integrated

SCHEMA_VERSION = 1
CAMPAIGNS = ('table1', 'table2', 'table3', 'figure1')
FORMATS = {'csv': '.csv', 'json': '.jsonl', 'nc': '.nc'}
CELL_COLUMNS = ['schema', 'cell', 'n', 'kappa', 'rho', 'swaps']
FORMULA_COLUMNS = ['gamma_m_formula', 'gamma_w_formula']


@dataclass(frozen=True)
class Cell:
    index: int
    n: int
    kappa: int
    rho: float
    swap_mode: str = 'disjoint'

    @property
    def correlation(self):
        """rho 0 stands for uniform preferences."""
        return self.rho if self.rho else None

    def spec(self, seed):
        return MarketSpec(self.n, self.kappa, self.correlation, seed, self.swap_mode)


@dataclass(frozen=True)
class RunRecord:
    """What integration did in one run of one cell."""
    cell: Cell
    run: int
    swaps: int
    stats: IntegrationStats
    total_proposals: int
    community_proposals: int
    proposals_by_community: tuple = ()
    spearman_men: float = math.nan
    spearman_women: float = math.nan

    def as_row(self):
        """One flat row: cell identifiers, every IntegrationStats field and the derived per-run columns."""
        cell, stats = self.cell, self.stats
        row = {'schema': SCHEMA_VERSION, 'cell': cell.index, 'n': cell.n, 'kappa': cell.kappa,
               'rho': float(cell.rho), 'swaps': self.swaps, 'run': self.run}
        row.update(stats.as_dict())
        share_men = stats.frac_worse_men_share
        share_women = stats.frac_worse_women_share
        row.update({
            'rank_m_society': stats.rank_m_society,
            'rank_w_society': stats.rank_w_society,
            'percent_worse': 100 * stats.frac_worse,
            'percent_worse_men': None if share_men is None else 100 * share_men,
            'percent_worse_women': None if share_women is None else 100 * share_women,
            'normalised_loss_men': normalised_loss(stats.mean_loss_men, cell.n, cell.kappa),
            'normalised_loss_women': normalised_loss(stats.mean_loss_women, cell.n, cell.kappa),
            'total_proposals': self.total_proposals,
            'community_proposals': self.community_proposals,
            'spearman_men': self.spearman_men,
            'spearman_women': self.spearman_women,
        })
        row.update({f'community_proposals_{c}': count for c, count in enumerate(self.proposals_by_community)})
        return row


def check_invariants(stats, label=''):
    """
    :raises InvariantViolation: if more than half of the society is worse off, or a hurt agent's segregated partner
        does not gain
    """
    if stats.frac_worse > 0.5:
        raise InvariantViolation(f'{label}: {stats.frac_worse:.3f} of the society is worse off')
    if stats.rescue_violations:
        raise InvariantViolation(f'{label}: {stats.rescue_violations} hurt agents whose segregated partner '
                                 f'does not gain')


def simulate_run(task):
    """
    One Monte Carlo run. Module level so worker processes can unpickle it.

    :param task: (cell, run index, master seed)
    :type task: tuple
    :rtype: RunRecord
    """
    cell, run, seed = task
    spec = cell.spec(seed)
    controller = RandomMarketController(spec, cell.index)
    market = controller.get_market(run)
    controller.disconnect()
    segregated, society = segregated_and_integrated(market)
    stats = integration_stats(market, segregated, society)
    check_invariants(stats, f'cell {cell.index} run {run}')
    spearman = {}
    if market.status_quo is not None:
        spearman = {'spearman_men': spearman_to_status_quo(market, Side.MAN),
                    'spearman_women': spearman_to_status_quo(market, Side.WOMAN)}
    return RunRecord(cell=cell, run=run, swaps=spec.swaps, stats=stats,
                     total_proposals=society.total_proposals,
                     community_proposals=sum(r.total_proposals for r in segregated),
                     proposals_by_community=tuple(r.total_proposals for r in segregated),
                     **spearman)


def records_frame(records):
    """RunRecords as a DataFrame, one row per run, metric columns as floats."""
    frame = pd.DataFrame([r.as_row() for r in records])
    if frame.empty:
        return frame
    metrics = [c for c in frame.columns if c not in CELL_COLUMNS + ['run']]
    frame[metrics] = frame[metrics].astype(float)
    return frame


def aggregate(records, report=None):
    """
    Mean, standard deviation and standard error per cell of every reported column.

    :param records: the runs, as returned by records_frame
    :type records: pandas.DataFrame
    :param report: columns to aggregate (default: every metric column); formula columns are evaluated per cell
    :type report: list of str
    :rtype: pandas.DataFrame
    """
    if records.empty:
        return pd.DataFrame(columns=CELL_COLUMNS + ['runs', 'failed'])
    metrics = [c for c in records.columns if c not in CELL_COLUMNS + ['run']]
    report = metrics + FORMULA_COLUMNS if report is None else list(report)
    unknown = [c for c in report if c not in metrics and c not in FORMULA_COLUMNS]
    if unknown:
        raise InvalidArgumentError(f'cannot report unknown columns {unknown}')
    rows = []
    for cell, runs in records.groupby('cell', sort=True):
        row = {c: runs[c].iloc[0] for c in CELL_COLUMNS}
        row['runs'] = len(runs)
        row['failed'] = 0
        for column in report:
            if column in FORMULA_COLUMNS:
                row[column] = _formula(column, int(row['n']), int(row['kappa']))
                continue
            values = runs[column]
            row[f'{column}_mean'] = values.mean()
            row[f'{column}_std'] = values.std()
            row[f'{column}_sem'] = values.sem()
        rows.append(row)
    return pd.DataFrame(rows)


def _formula(column, n, kappa):
    if n < 2:
        return math.nan
    gamma_m, gamma_w = asymptotic_gains(n, kappa)
    return gamma_m if column == 'gamma_m_formula' else gamma_w


class CampaignOperator(OperatorBase):
    """
    Runs one of the campaigns behind the tables and the figure.
    """
    def __init__(self, campaign, properties=None):
        """
        :param campaign: one of 'table1', 'table2', 'table3', 'figure1'
        :type campaign: str
        :param properties: optional properties dictionary, note that this can be loaded from file with load_config()
        :type properties: dict
        """
        self.logger = logging.getLogger(__name__)
        if campaign not in CAMPAIGNS:
            raise InvalidArgumentError(f'unknown campaign {campaign!r} (choose from {", ".join(CAMPAIGNS)})')
        self.campaign = campaign
        self.default_config = f'{campaign}_config.yml'
        self.properties = dict(properties) if properties else {}
        self.pool = None
        self.records = None
        self.aggregates = None
        self.failed_cells = []

    def load_config(self, filename=None, full=False):
        """
        Load the campaign properties from a yaml file.

        :param filename: path to the config file (default: <campaign>_config.yml in integra.core.defaults)
        :type filename: str
        :param full: replace values of 'scan' with the ones of the 'full' section (large grid, more runs)
        :type full: bool
        """
        super().load_config(filename)
        if full:
            self.logger.info('Using the full grid')
            self.properties['scan'].update(self.properties.get('full') or {})

    def grid(self):
        """The cells of the campaign, n outer, then kappa, then rho."""
        scan = self.properties['scan']
        values = [scan['n'], scan['kappa'], scan.get('rho') or [0]]
        swap_mode = scan.get('swap_mode') or 'disjoint'
        return [Cell(i, int(n), int(kappa), float(rho), swap_mode)
                for i, (n, kappa, rho) in enumerate(product(*values))]

    def _validate(self):
        if 'scan' not in self.properties:
            raise InvalidArgumentError("The config file or properties dict should contain 'scan' section.")
        scan = self.properties['scan']
        required_keys = ['n', 'kappa', 'runs', 'seed']
        if not all(key in scan for key in required_keys):
            raise InvalidArgumentError("'scan' should contain: " + ', '.join(required_keys))
        for key in ('n', 'kappa', 'rho'):
            if key in scan and not isinstance(scan[key], (list, tuple)):
                scan[key] = [scan[key]]
        if int(scan['runs']) < 1:
            raise InvalidArgumentError('runs should be positive')
        for cell in self.grid():
            cell.spec(int(scan['seed']))  # raises for invalid n, kappa, rho or seed

    def do_scan(self, param=None, workers=None):
        """
        Run the campaign. Optionally, the scan parameters can be updated by passing a dictionary. These values
        overwrite the existing values in properties['scan'].

        :param param: optional dictionary with any of n, kappa, rho (lists), runs, seed and swap_mode
        :type param: dict
        :param workers: worker processes (default: INTEGRA_WORKERS, then the config files)
        :type workers: int
        :return: the aggregates, one row per cell
        :rtype: pandas.DataFrame
        """
        if 'scan' not in self.properties:
            self.load_config()
        self.merge_scan_parameters(param)
        self._validate()
        scan = self.properties['scan']
        execution = self.properties.get('execution') or {}
        general = read_config()[0].get('execution', {})
        if workers is None:
            workers = default_workers(execution.get('workers'))
        chunksize = execution.get('chunksize') or general.get('chunksize', 1)
        runs, seed = int(scan['runs']), int(scan['seed'])
        cells = self.grid()
        self.pool = WorkerPool(workers, chunksize)
        self.logger.info(f'Starting {self.campaign}: {len(cells)} cells x {runs} runs on {workers} worker(s) ...')

        records, self.failed_cells = [], []
        for cell in cells:
            self.logger.info(f'cell {cell.index}: n={cell.n}, kappa={cell.kappa}, rho={cell.rho}')
            try:
                records.extend(self.pool.map(simulate_run, [(cell, run, seed) for run in range(runs)]))
            except Exception as e:
                self.logger.error(f'cell {cell.index} failed and is skipped: {e!r}')
                self.failed_cells.append(cell)
        self.disconnect_devices()

        self.records = records_frame(records)
        aggregates = aggregate(self.records, self.properties.get('report'))
        if self.failed_cells:
            failed = pd.DataFrame([{'schema': SCHEMA_VERSION, 'cell': c.index, 'n': c.n, 'kappa': c.kappa,
                                    'rho': c.rho, 'swaps': c.spec(seed).swaps, 'runs': 0, 'failed': runs}
                                   for c in self.failed_cells])
            aggregates = pd.concat([aggregates, failed], ignore_index=True).sort_values('cell', ignore_index=True)
        self.aggregates = aggregates
        self.logger.info(f'{self.campaign} finished: {len(cells) - len(self.failed_cells)} cells, '
                         f'{len(self.failed_cells)} failed')
        return aggregates

    def save_scan(self, filename, fmt=None, records_filename=None, metadata=None, store_conf=False):
        """
        Write the aggregates (and optionally the run records) to file.

        To load nc data:
        import xarray as xr
        xr.load_dataset(filename)

        :param filename: full path and filename of the aggregates
        :type filename: str
        :param fmt: 'csv', 'json' or 'nc' (default: from the file extension, else csv)
        :type fmt: str
        :param records_filename: optional path for the run records, in the same format
        :type records_filename: str
        :param metadata: optional attributes for nc files
        :type metadata: dict
        :param store_conf: store the operator properties in a yaml file of the same name
        :type store_conf: bool
        """
        if self.aggregates is None:
            self.logger.warning('no data to save yet')
            return
        fmt = fmt or output_format(filename)
        self.write(self.aggregates, filename, fmt, metadata)
        if records_filename:
            self.write(self.records, records_filename, fmt, metadata)
        if store_conf:
            yml_fname = os.path.splitext(filename)[0] + '.yml'
            self.logger.info(f'Storing Operator properties in {yml_fname}')
            try:
                with open(yml_fname, 'w') as f:
                    yaml.safe_dump(self.properties, f)
            except OSError as e:
                raise InvalidArgumentError(f'cannot write {yml_fname}: {e}') from None

    def write(self, frame, filename, fmt, metadata=None):
        if fmt not in FORMATS:
            raise InvalidArgumentError(f'unknown output format {fmt!r} (choose from {", ".join(FORMATS)})')
        if os.path.exists(filename):
            self.logger.warning(f'overwriting existing file: {filename}')
        try:
            self._write(frame, filename, fmt, metadata)
        except OSError as e:
            raise InvalidArgumentError(f'cannot write {filename}: {e}') from None
        self.logger.info(f'Data saved in {filename}')

    def _write(self, frame, filename, fmt, metadata):
        if fmt == 'csv':
            frame.to_csv(filename, index=False)
        elif fmt == 'json':
            frame.to_json(filename, orient='records', lines=True)
        else:
            index = 'run' if 'run' in frame.columns else 'cell'
            keys = ['cell', 'run'] if index == 'run' else ['cell']
            data = xr.Dataset.from_dataframe(frame.set_index(keys))
            data.attrs['time'] = datetime.datetime.now().strftime('%d-%m-%YT%H:%M:%S')
            data.attrs['campaign'] = self.campaign
            for key in ['user', 'config_file']:
                if key in self.properties:
                    data.attrs[key] = str(self.properties[key])
            for key, value in self.properties.get('scan', {}).items():
                if isinstance(value, (int, float, bool, str)):
                    data.attrs[key] = value
            if isinstance(metadata, dict):
                data.attrs.update(metadata)
            data.to_netcdf(filename)

    def disconnect_devices(self):
        """
        Stop the worker processes.
        (Note that this method will get called when exiting a python with block)
        """
        if self.pool is not None:
            self.pool.close()


def output_format(filename, default='csv'):
    """Output format implied by a file extension."""
    extension = os.path.splitext(filename)[1].lower()
    for fmt, ext in FORMATS.items():
        if extension in (ext, '.' + fmt):
            return fmt
    return default


if __name__ == "__main__":
    import integra  # Import integra, for integra style logging

    with CampaignOperator('table1') as opr:
        opr.load_config()
        table = opr.do_scan({'n': [10], 'kappa': [2], 'runs': 50})
    print(table[['n', 'kappa', 'percent_worse_mean', 'percent_worse_men_mean', 'percent_worse_women_mean']])
