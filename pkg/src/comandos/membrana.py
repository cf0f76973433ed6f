"""Comando membrane: estimativas da membrana polarizada e figuras de acoplamento."""
import logging

import numpy as np
import pandas as pd

from comandos.comum import qubit_no_ponto_operacao
from fisica.eletromecanica import (comparar_x_zpf, derivadas_capacitancia, equilibrio_estavel,
                                   figuras_acoplamento, modulacao_carga, tensao_pull_in)
from processamento.tratar_dados import parametros_membrana

logger = logging.getLogger(__name__)


def curva_equilibrio(p, V_pull_in, pontos=41):
    """Posição de equilíbrio estável de 0 até o pull-in"""
    tensoes = np.linspace(0.0, V_pull_in, pontos)
    posicoes = []
    for V in tensoes:
        z = equilibrio_estavel(float(V), p)
        posicoes.append(np.nan if z is None else z)
    return pd.DataFrame({'V_g_V': tensoes, 'z_m': posicoes, 'z_sobre_h': np.array(posicoes) / p.gap})


def executar(config, threads=1):
    m = config['membrana']
    p = parametros_membrana(config)
    qubit = qubit_no_ponto_operacao(config)

    pull_in = tensao_pull_in(p)
    N_tabelado = modulacao_carga(p, usar_tabelado=True)
    N_calculado = modulacao_carga(p, usar_tabelado=False)
    figuras = figuras_acoplamento(N_tabelado, qubit.omega_ge, qubit.phi_eg, qubit.dissipacao.T1,
                                  p.capacitancia, m['delta_q_e'])
    logger.info("N_drive=%.4g, N_min=%.4g, pull-in numérico %.4g V", figuras.N_drive, figuras.N_min,
                pull_in['V_pull_in_numerico'])

    resumo = {
        **comparar_x_zpf(p),
        **pull_in,
        'razao_pull_in': pull_in['V_pull_in_numerico'] / pull_in['V_max_analitico'],
        **derivadas_capacitancia(p),
        'capacitancia_placas_F': p.capacitancia_placas,
        'N_drive': N_tabelado,
        'N_drive_x_zpf_calculado': N_calculado,
        'Omega_r_rad_s': figuras.Omega_r,
        'N_min': figuras.N_min,
        'acoplamento_forte': figuras.acoplamento_forte,
        'delta_q_e_sqrtHz': m['delta_q_e'],
        'sensibilidade_energia_hbar': figuras.sensibilidade_energia,
    }
    return {
        'equilibrio.csv': curva_equilibrio(p, pull_in['V_pull_in_numerico']),
        'membrana.json': resumo,
    }
