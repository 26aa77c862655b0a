import pytest
from hypothesis import given

from integra.core.errors import InvalidArgumentError, MarketFormatError
from integra.core.market import man, woman
from integra.core.market_file import dump_market, format_market, load_market, parse_market
from strategies import markets

PROP1 = """
# two communities
2 1x1 1x1
0 m 0 : 0.0 1.0
1 m 0 : 0.0 1.0
0 w 0 : 1.0 0.0   # w^A prefers m^B
1 w 0 : 1.0 0.0
"""


def test_parse(prop1):
    market = parse_market(PROP1)
    assert market.preferences == prop1.preferences
    assert market.preference_list(woman(0)) == [man(1), man(0)]


@pytest.mark.parametrize('text, line', [
    ('', None),
    ('2 1x1', 1),
    ('1 1x1\n0 m 0 0.0', 2),
    ('1 1x1\n0 m 0 : 0.0\n0 m 0 : 0.0', 3),
    ('1 1x1\n0 q 0 : 0.0', 2),
    ('2 1x1 1x1\n0 m 0 : 0.0 1.0\n1 m 0 : 5.0 1.0', 3),
    ('2 1x1 1x1\n0 m 0 : 0.0 1.0\n1 m 0 : 0.0 1.1', 3),
    ('2 1x1 1x1\n0 m 0 : 0.0 1.0\n1 m 2 : 0.0 1.0', 3),
    ('2 1x1 1x1\n0 m 0 : 0.0', 2),
    ('2 1x1 1x1\n0 m 0 : 0.0 0.0', 2),
])
def test_errors_name_the_line(text, line):
    with pytest.raises(MarketFormatError) as info:
        parse_market(text)
    assert info.value.line_number == line
    if line is not None:
        assert str(info.value).startswith(f'line {line}:')


def test_incomplete_market():
    with pytest.raises(MarketFormatError):
        parse_market('1 1x1\n0 m 0 : 0.0')


@given(markets())
def test_format_then_parse(market):
    assert parse_market(format_market(market)).preferences == market.preferences


def test_dump_and_load(tmp_path, prop2):
    filename = str(tmp_path / 'market.mkt')
    dump_market(prop2, filename)
    assert load_market(filename).preferences == prop2.preferences


def test_missing_file(tmp_path):
    with pytest.raises(InvalidArgumentError):
        load_market(str(tmp_path / 'nope.mkt'))


def test_non_utf8_file(tmp_path):
    filename = tmp_path / 'market.mkt'
    filename.write_bytes(b'2 1x1 1x1\n0 m 0 : 0.0 1.0 \xff\xfe\n')
    with pytest.raises(MarketFormatError, match='utf-8'):
        load_market(str(filename))


def test_unwritable_file(tmp_path, prop2):
    with pytest.raises(InvalidArgumentError, match='cannot write'):
        dump_market(prop2, str(tmp_path / 'missing' / 'market.mkt'))
