import logging
import math
from dataclasses import replace

import pytest

from fisica.constantes import CONSTANTES
from fisica.eletromecanica import (ParametrosMembrana, comparar_x_zpf, derivadas_capacitancia,
                                   equilibrio_estavel, figuras_acoplamento, forca,
                                   massa_de_movimento_ponto_zero, modulacao_carga,
                                   modulacao_minima, movimento_ponto_zero, sensibilidade_energia,
                                   tensao_pull_in)
from fisica.erros import ErroEstabilidade, ErroParametro

OMEGA_GE = CONSTANTES.hz_para_rad(1.8e6)


@pytest.fixture
def membrana():
    return ParametrosMembrana(lado=150e-6, tensao_mecanica=1e9, Omega_m_Hz=1.8e6, massa=3e-12,
                              densidade=3200.0, gap=500e-9, area=8.1e-9, capacitancia=50e-15,
                              V_g=5.0, x_zpf=7e-15)


def test_modulacao_de_carga_tabelada(membrana):
    assert modulacao_carga(membrana) == pytest.approx(0.0109, abs=2e-4)
    calculada = modulacao_carga(membrana, usar_tabelado=False)
    assert calculada == pytest.approx(0.0109 * 1.2466e-15 / 7e-15, rel=0.02)


def test_modulacao_minima():
    assert modulacao_minima(OMEGA_GE, math.pi, 34e-6) == pytest.approx(5.2e-3, rel=0.02)


def test_sensibilidade_em_energia():
    assert sensibilidade_energia(33e-6, 50e-15) == pytest.approx(2.65, rel=0.02)


def test_pull_in(membrana):
    limites = tensao_pull_in(membrana)
    assert limites['V_max_analitico'] == pytest.approx(25.9, abs=0.1)
    razao = limites['V_pull_in_numerico'] / limites['V_max_analitico']
    assert razao == pytest.approx(math.sqrt(8 / 27), rel=1e-4)


def test_equilibrio(membrana):
    assert equilibrio_estavel(0.0, membrana) == membrana.gap
    z = equilibrio_estavel(10.0, membrana)
    assert 2 * membrana.gap / 3 < z < membrana.gap
    assert abs(forca(z, 10.0, membrana)) < 1e-9 * membrana.rigidez * membrana.gap
    assert equilibrio_estavel(20.0, membrana) is None


def test_polarizacao_acima_do_pull_in(membrana):
    with pytest.raises(ErroEstabilidade):
        modulacao_carga(replace(membrana, V_g=20.0))
    assert modulacao_carga(replace(membrana, V_g=0.0)) == 0.0


def test_x_zpf(membrana):
    comparacao = comparar_x_zpf(membrana)
    assert comparacao['x_zpf_calculado_m'] == pytest.approx(1.247e-15, rel=1e-3)
    assert comparacao['razao_tabelado_calculado'] == pytest.approx(5.6, rel=0.01)
    massa = massa_de_movimento_ponto_zero(comparacao['x_zpf_calculado_m'], membrana.Omega_m)
    assert massa == pytest.approx(membrana.massa)
    assert comparar_x_zpf(replace(membrana, x_zpf=None))['razao_tabelado_calculado'] is None
    with pytest.raises(ErroParametro):
        movimento_ponto_zero(0.0, membrana.Omega_m)


def test_capacitancia_discrepante_emite_aviso(membrana, caplog):
    with caplog.at_level(logging.WARNING):
        replace(membrana, capacitancia=50e-15)
    assert any('ε0·S/h' in r.getMessage() for r in caplog.records)
    caplog.clear()
    with caplog.at_level(logging.WARNING):
        replace(membrana, capacitancia=membrana.capacitancia_placas)
    assert not caplog.records


def test_derivadas_de_capacitancia(membrana):
    derivadas = derivadas_capacitancia(membrana)
    assert derivadas['dC_dx_aproximado_F_m'] == pytest.approx(1e-7)
    assert derivadas['dC_dx_placas_F_m'] == pytest.approx(membrana.capacitancia_placas / membrana.gap)


def test_regime_de_acoplamento_forte():
    forte = figuras_acoplamento(0.0109, OMEGA_GE, math.pi, 34e-6, 50e-15, 33e-6)
    assert forte.acoplamento_forte
    assert forte.Omega_r == pytest.approx(2 * 0.0109 * OMEGA_GE * math.pi)
    assert forte.N_drive > forte.N_min
    fraco = figuras_acoplamento(1e-3, OMEGA_GE, math.pi, 34e-6, 50e-15, 33e-6)
    assert not fraco.acoplamento_forte
    with pytest.raises(ErroParametro):
        figuras_acoplamento(1e-3, OMEGA_GE, math.pi, 0.0, 50e-15, 33e-6)


@pytest.mark.parametrize("campo", ['massa', 'gap', 'area', 'capacitancia'])
def test_parametros_nao_positivos(membrana, campo):
    with pytest.raises(ErroParametro):
        replace(membrana, **{campo: 0.0})
