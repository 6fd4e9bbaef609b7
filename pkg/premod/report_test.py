import json
import unittest
from fractions import Fraction

import jsonschema

from premod import config
from premod.counting import count_L
from premod.report import ERROR, FAIL, PASS, REPORT_SCHEMA, Report, jsonable


class JsonableTest(unittest.TestCase):

  def test_values(self):
    self.assertEqual(jsonable(complex(1, 2)), {'re': 1.0, 'im': 2.0})
    self.assertEqual(jsonable(complex(3, 0)), 3.0)
    self.assertEqual(jsonable(Fraction(1, 3)), '1/3')
    self.assertEqual(jsonable(Fraction(4, 2)), 2)
    self.assertIsNone(jsonable(None))
    self.assertIs(jsonable(True), True)

  def test_records(self):
    row = jsonable(count_L(1, 3))
    self.assertEqual(row['L'], 1)
    self.assertEqual(row['k_nN'], '2/3')
    self.assertIsNone(row['shortcut_ok'])


class ReportTest(unittest.TestCase):

  def setUp(self):
    self.report = Report('verify', config.load_default(), '0.1.0')
    self.report.add('a', value=1j, residual=1e-12, tolerance=1e-10)
    self.report.add('b', value=2.5, residual=1.0, tolerance=1e-10, status=FAIL)
    self.report.add('c', status=ERROR, message='PoleError: at a lattice point')
    self.report.add('d', values=[Fraction(1, 2), 3])

  def test_status_lists(self):
    self.assertEqual([r['name'] for r in self.report.failures()], ['b'])
    self.assertEqual([r['name'] for r in self.report.errors()], ['c'])

  def test_json(self):
    data = json.loads(self.report.render('json'))
    jsonschema.validate(data, REPORT_SCHEMA)
    self.assertEqual(data['seed'], 123)
    self.assertEqual(data['results'][0]['value'], {'re': 0.0, 'im': 1.0})
    self.assertEqual(data['results'][3]['values'], ['1/2', 3])
    self.assertEqual(data['results'][0]['status'], PASS)

  def test_csv(self):
    lines = self.report.render('csv').splitlines()
    self.assertEqual(lines[0], 'name,status,value,residual,tolerance,message')
    self.assertEqual(len(lines), 5)
    self.assertTrue(lines[2].startswith('b,fail,2.5,'))

  def test_text(self):
    text = self.report.render('text')
    self.assertTrue(text.startswith('***** verify (seed = 123) *****'))
    self.assertIn('PoleError', text)

  def test_unknown_format(self):
    with self.assertRaises(ValueError):
      self.report.render('xml')


if __name__ == '__main__':
  unittest.main()
