"""Comando matel: elementos de matriz e coeficientes c0, cx, cz vs fluxo."""
import logging
import math

import pandas as pd

from fisica.circuito import elementos_matriz, resolver_fluxos
from fisica.constantes import CONSTANTES
from processamento.tratar_dados import base_circuito, fluxos_varredura, parametros_circuito

logger = logging.getLogger(__name__)

COLUNAS_ELEMENTOS = [
    'phi_ext_rad', 'f_ge_Hz', 'abs_phi_ge', 'abs_phi_gf', 'abs_phi_gh', 'abs_phi_ef',
    'abs_n_ge', 'c0', 'abs_cx', 'cz', 'erro_carga_fluxo',
]


def linha_elementos(phi_ext, sol, operadores, E_C):
    """Uma linha da tabela; E_C em rad/s"""
    el = elementos_matriz(sol, operadores, phi_ext)
    omega_ge = sol.energias[1] - sol.energias[0]
    fase_ge = abs(el.elemento('fase', 'g', 'e'))
    carga_ge = abs(el.elemento('carga', 'g', 'e'))
    # |8E_C⟨e|n̂|g⟩| = |ω_ge⟨e|φ̂|g⟩|
    referencia = omega_ge * fase_ge
    erro = abs(8 * E_C * carga_ge - referencia) / referencia if referencia > 0 else math.nan
    return {
        'phi_ext_rad': phi_ext,
        'f_ge_Hz': CONSTANTES.rad_para_hz(omega_ge),
        'abs_phi_ge': fase_ge,
        'abs_phi_gf': abs(el.elemento('fase', 'g', 'f')),
        'abs_phi_gh': abs(el.elemento('fase', 'g', 'h')),
        'abs_phi_ef': abs(el.elemento('fase', 'e', 'f')),
        'abs_n_ge': carga_ge,
        'c0': el.c0,
        'abs_cx': abs(el.cx),
        'cz': el.cz,
        'erro_carga_fluxo': erro,
    }


def executar(config, threads=1):
    params = parametros_circuito(config)
    base = base_circuito(config)
    fluxos = fluxos_varredura(config)
    E_C = CONSTANTES.hz_para_rad(params.E_C_Hz)
    logger.info("Elementos de matriz em %d pontos de fluxo", len(fluxos))

    solucoes, operadores = resolver_fluxos(params, fluxos, base, k=4, threads=threads)
    linhas = []
    for phi_ext, sol in zip(fluxos, solucoes):
        if sol is None:
            linhas.append({'phi_ext_rad': float(phi_ext)})
            continue
        linhas.append(linha_elementos(float(phi_ext), sol, operadores, E_C))
    tabela = pd.DataFrame(linhas, columns=COLUNAS_ELEMENTOS)

    validos = tabela['erro_carga_fluxo'].dropna()
    resumo = {
        'pontos': len(fluxos),
        'erro_carga_fluxo_max': float(validos.max()) if len(validos) else None,
    }
    return {'elementos.csv': tabela, 'resumo_elementos.json': resumo}
