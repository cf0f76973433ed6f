import math

from fisica.circuito import (construir_hamiltoniano, construir_operadores, diagonalizar_e_rotular,
                             elementos_matriz)
from processamento.tratar_dados import base_circuito, parametros_circuito, qubit_sensor


def resolver_ponto(config, phi_ext=math.pi, k=2):
    """Diagonaliza o circuito em phi_ext; retorna (solução, elementos de matriz)"""
    params = parametros_circuito(config)
    base = base_circuito(config)
    operadores = construir_operadores(params, base)
    sol = diagonalizar_e_rotular(construir_hamiltoniano(params, phi_ext, base, operadores), k)
    return sol, elementos_matriz(sol, operadores, phi_ext)


def qubit_no_ponto_operacao(config):
    """QubitSensor em π; f_ge_Hz e phi_eg nulos no arquivo são calculados do circuito"""
    protocolo = config['protocolo']
    if protocolo['f_ge_Hz'] is not None and protocolo['phi_eg'] is not None:
        return qubit_sensor(config)
    sol, elementos = resolver_ponto(config)
    omega_ge = float(sol.energias[1] - sol.energias[0])
    phi_eg = abs(elementos.elemento('fase', 'e', 'g'))
    return qubit_sensor(config, omega_ge=omega_ge, phi_eg=phi_eg)
