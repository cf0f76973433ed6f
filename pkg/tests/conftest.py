import json
import math

import pytest

from fisica.circuito import (ConfiguracaoBase, ParametrosCircuito, construir_hamiltoniano,
                             construir_operadores, diagonalizar_e_rotular, elementos_matriz)
from fisica.constantes import CONSTANTES
from fisica.dinamica import DissipacaoQubit
from fisica.sensoriamento import QubitSensor
from processamento.carregar_config import validar_config

# Parâmetros do circuito de referência (Hz)
E_J_REF = 5.178e9
E_C_REF = 0.4144e9
E_L_REF = 0.18e9
T1_REF = 34e-6
F_GE_REF = 1.8e6


@pytest.fixture(scope="session")
def params_referencia():
    return ParametrosCircuito(E_J_Hz=E_J_REF, E_C_Hz=E_C_REF, E_L_Hz=E_L_REF)


@pytest.fixture(scope="session")
def base_referencia():
    return ConfiguracaoBase(dimensao=120)


@pytest.fixture(scope="session")
def operadores_referencia(params_referencia, base_referencia):
    return construir_operadores(params_referencia, base_referencia)


@pytest.fixture(scope="session")
def solucao_pi(params_referencia, base_referencia, operadores_referencia):
    H = construir_hamiltoniano(params_referencia, math.pi, base_referencia, operadores_referencia)
    return diagonalizar_e_rotular(H, 4)


@pytest.fixture(scope="session")
def elementos_pi(solucao_pi, operadores_referencia):
    return elementos_matriz(solucao_pi, operadores_referencia, math.pi)


@pytest.fixture
def qubit_referencia():
    return QubitSensor(omega_ge=CONSTANTES.hz_para_rad(F_GE_REF), phi_eg=math.pi,
                       dissipacao=DissipacaoQubit.de_T1(T1_REF))


@pytest.fixture
def config_bruta():
    return {'circuito': {'E_J_Hz': E_J_REF, 'E_C_Hz': E_C_REF, 'E_L_Hz': E_L_REF}}


@pytest.fixture
def config_referencia(config_bruta):
    return validar_config(config_bruta)


@pytest.fixture
def arquivo_config(tmp_path):
    """Grava um dicionário como config JSON e retorna o caminho"""
    def gravar(dados, nome='config.json'):
        caminho = tmp_path / nome
        caminho.write_text(json.dumps(dados), encoding='utf-8')
        return caminho
    return gravar
