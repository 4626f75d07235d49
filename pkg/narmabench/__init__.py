"""Benchmark quantum and classical reservoirs and recurrent networks on the NARMA-10 task."""

# Please keep the meta information in sync with setup.py.
#
# The meta information is denormalized here instead of a separate module so that
# setup.py does not need to import the package.

# Don't forget to update the version in __init__.py and CHANGELOG.rst!
__version__ = "1.0.0"
__author__ = "narmabench developers"
__copyright__ = "Copyright 2024 narmabench developers"
__license__ = "MIT"
__status__ = "Production"

# pylint: disable=invalid-name
# pylint: disable=wrong-import-position

# We need to explicitly assign the aliases instead of using
# ``from ... import ... as ...`` statements since mypy complains
# that the module narmabench lacks these imports.
# See also:
# https://stackoverflow.com/questions/44344327/cant-make-mypy-work-with-init-py-aliases

import narmabench._globals

SLOW = narmabench._globals.SLOW

import narmabench._seeding

Concern = narmabench._seeding.Concern
derive_seed_sequence = narmabench._seeding.derive_seed_sequence
generator_for = narmabench._seeding.generator_for

import narmabench._timeseries

Series = narmabench._timeseries.Series
SplitSpec = narmabench._timeseries.SplitSpec
SeriesView = narmabench._timeseries.SeriesView
simulate_narma10 = narmabench._timeseries.simulate_narma10
generate_narma10 = narmabench._timeseries.generate_narma10
split = narmabench._timeseries.split
write_series_csv = narmabench._timeseries.write_series_csv
read_series_csv = narmabench._timeseries.read_series_csv

import narmabench._quantum

QuantumState = narmabench._quantum.QuantumState
Unitary = narmabench._quantum.Unitary
zero_state = narmabench._quantum.zero_state
basis_state = narmabench._quantum.basis_state
rx = narmabench._quantum.rx
rz = narmabench._quantum.rz
apply_one_qubit = narmabench._quantum.apply_one_qubit
apply_two_qubit = narmabench._quantum.apply_two_qubit
apply_cnot = narmabench._quantum.apply_cnot
apply_unitary = narmabench._quantum.apply_unitary
haar_random_unitary = narmabench._quantum.haar_random_unitary
measure_all = narmabench._quantum.measure_all
pauli_z_expectations = narmabench._quantum.pauli_z_expectations

import narmabench._readout

ReservoirFeatures = narmabench._readout.ReservoirFeatures
TrainedReadout = narmabench._readout.TrainedReadout
with_bias = narmabench._readout.with_bias
fit_readout = narmabench._readout.fit_readout
apply_readout = narmabench._readout.apply_readout

import narmabench._esn

EsnConfig = narmabench._esn.EsnConfig
EsnReservoir = narmabench._esn.EsnReservoir
spectral_radius = narmabench._esn.spectral_radius
build_reservoir = narmabench._esn.build_reservoir
run_esn = narmabench._esn.run_reservoir

import narmabench._qrc

Mode = narmabench._qrc.Mode
QrcConfig = narmabench._qrc.QrcConfig
QrcTrace = narmabench._qrc.QrcTrace
input_block = narmabench._qrc.input_block
feedback_block = narmabench._qrc.feedback_block
qrc_step = narmabench._qrc.step
run_qrc = narmabench._qrc.run_reservoir
write_trace_csv = narmabench._qrc.write_trace_csv

import narmabench._optim

TrainSpec = narmabench._optim.TrainSpec

import narmabench._recurrent

LstmConfig = narmabench._recurrent.LstmConfig
LstmParams = narmabench._recurrent.LstmParams
init_lstm_params = narmabench._recurrent.init_lstm_params
lstm_forward = narmabench._recurrent.lstm_forward
lstm_backward = narmabench._recurrent.lstm_backward
train_lstm = narmabench._recurrent.train_lstm
predict_lstm = narmabench._recurrent.predict_lstm
count_lstm_params = narmabench._recurrent.count_lstm_params

import narmabench._qlstm

QlstmConfig = narmabench._qlstm.QlstmConfig
QlstmParams = narmabench._qlstm.QlstmParams
init_qlstm_params = narmabench._qlstm.init_qlstm_params
gate_circuit = narmabench._qlstm.gate_circuit
parameter_shift_grad = narmabench._qlstm.parameter_shift_grad
qlstm_cell = narmabench._qlstm.qlstm_cell
train_qlstm = narmabench._qlstm.train_qlstm
predict_qlstm = narmabench._qlstm.predict_qlstm
count_qlstm_params = narmabench._qlstm.count_qlstm_params

import narmabench._timing

time_block = narmabench._timing.time_block

import narmabench._metrics

BenchRecord = narmabench._metrics.BenchRecord
SustainabilityReport = narmabench._metrics.SustainabilityReport
PUBLISHED_RECORDS = narmabench._metrics.PUBLISHED_RECORDS
rmse = narmabench._metrics.rmse
nrmse = narmabench._metrics.nrmse
count_params = narmabench._metrics.count_params
memory_capacity = narmabench._metrics.memory_capacity
sustainability_index = narmabench._metrics.sustainability_index

import narmabench._config

BenchConfig = narmabench._config.BenchConfig
MemoryCapacitySpec = narmabench._config.MemoryCapacitySpec
load_config = narmabench._config.load_config
loads_config = narmabench._config.loads_config
dump_config = narmabench._config.dump_config

import narmabench._bench

BenchResult = narmabench._bench.BenchResult
run_model = narmabench._bench.run_model
run_bench = narmabench._bench.run_bench
sweep_train_sizes = narmabench._bench.sweep_train_sizes
report_run = narmabench._bench.report_run

import narmabench.errors

InvalidArgumentError = narmabench.errors.InvalidArgumentError
UndefinedMetricError = narmabench.errors.UndefinedMetricError
DivergenceError = narmabench.errors.DivergenceError
ConfigError = narmabench.errors.ConfigError
