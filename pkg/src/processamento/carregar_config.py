"""Leitura, sobrescritas e validação do arquivo de configuração JSON."""
import copy
import hashlib
import json
import logging
from dataclasses import dataclass
from pathlib import Path

from fisica.erros import ErroConfiguracao

logger = logging.getLogger(__name__)

OBRIGATORIO = object()


@dataclass(frozen=True)
class Campo:
    tipo: str                 # 'real', 'inteiro', 'bool', 'texto', 'lista_real'
    padrao: object = None
    restricao: object = None  # 'positivo', 'nao_negativo' ou (mínimo, máximo)


def _real(padrao=None, restricao='positivo'):
    return Campo('real', padrao, restricao)


def _inteiro(padrao=None, restricao='positivo'):
    return Campo('inteiro', padrao, restricao)


# Seções e chaves aceitas; frequências em Hz, tempos em s, fluxos em Φ0
ESQUEMA = {
    'execucao': {
        'semente': _inteiro(0, 'nao_negativo'),
    },
    'circuito': {
        'E_J_Hz': _real(OBRIGATORIO),
        'E_C_Hz': _real(OBRIGATORIO),
        'E_L_Hz': _real(OBRIGATORIO),
        'E_JA_Hz': _real(),
        'E_p_Hz': _real(),
        'n_juncoes_array': _inteiro(),
        'dimensao': _inteiro(120, (20, 2000)),
    },
    'cavidade': {
        'omega_R_Hz': _real(5.64e9),
        'kappa_Hz': _real(2.4e6),
        'phi_zpf_R': _real(0.05),
    },
    'dissipacao': {
        'T1_s': _real(34e-6),
        'Gamma_phi_1_s': _real(None, 'nao_negativo'),
    },
    'protocolo': {
        'tau_I_s': _real(20e-6),
        'tau_prep_s': _real(13e-6),
        'N': _inteiro(1000, (2, 65535)),
        'N_p': _inteiro(5),
        'n_janelas': _inteiro(100),
        'escala_leitura': _real(0.84, (1e-9, 1.0)),
        'f_ge_Hz': _real(1.8e6),
        'phi_eg': _real(3.141592653589793),
        'gravar_registro': Campo('bool', False),
        'deltas_aliasing_Hz': Campo('lista_real', []),
    },
    'tom': {
        'N_drive': _real(5e-4, 'nao_negativo'),
        'Delta_Hz': _real(None, None),
        'fase_rad': _real(0.0, None),
    },
    'membrana': {
        'lado_m': _real(150e-6),
        'tensao_mecanica_Pa': _real(1e9),
        'Omega_m_Hz': _real(1.8e6),
        'massa_kg': _real(3e-12),
        'densidade_kg_m3': _real(3200.0),
        'gap_m': _real(500e-9),
        'area_m2': _real(8.1e-9),
        'capacitancia_F': _real(50e-15),
        'V_g_V': _real(5.0, 'nao_negativo'),
        'x_zpf_m': _real(7e-15),
        'delta_q_e': _real(33e-6),
    },
    'varredura': {
        'fluxo_inicio_phi0': _real(0.0, None),
        'fluxo_fim_phi0': _real(1.0, None),
        'pontos': _inteiro(101),
        'verificar_oraculo': Campo('bool', False),
    },
    'resfriamento': {
        'g_alfa_Hz': _real(0.12e6),
        'fluxo_phi0': _real(0.501, None),
        'comparar': Campo('bool', True),
        'rwa': Campo('bool', False),
        'n_cavidade': _inteiro(6, (2, 40)),
        'dessintonia_min_Hz': _real(-15e6, None),
        'dessintonia_max_Hz': _real(15e6, None),
        'pontos_dessintonia': _inteiro(61),
        'fluxo_mapa_inicio_phi0': _real(0.49, None),
        'fluxo_mapa_fim_phi0': _real(0.51, None),
        'pontos_fluxo_mapa': _inteiro(41),
        'duracao_rampa_s': _real(2e-6),
        'pontos_rampa': _inteiro(201, (2, 100000)),
    },
    'chevron': {
        'amplitudes': Campo('lista_real', [5e-4, 1e-3], 'positivo'),
        'dessintonia_max_Hz': _real(20e3),
        'pontos_frequencia': _inteiro(21),
        'duracao_max_s': _real(200e-6),
        'pontos_duracao': _inteiro(101, (2, 100000)),
        'n_niveis': _inteiro(2, (2, 4)),
    },
    'sensibilidade': {
        'T1s_s': Campo('lista_real', [20e-6, 34e-6, 50e-6, 100e-6], 'positivo'),
        'tau_min_s': _real(1e-6),
        'tau_max_s': _real(200e-6),
        'pontos': _inteiro(200, (2, 100000)),
    },
    'ajuste': {
        'P_esq_g': _real(0.9404, (0.0, 1.0)),
        'P_esq_e': _real(0.9587, (0.0, 1.0)),
        'P_esq_h': _real(0.1099, (0.0, 1.0)),
        'Pg_prep_g': _real(0.9767, (0.0, 1.0)),
        'Pg_prep_e': _real(0.0231, (0.0, 1.0)),
        'pontos_theta': _inteiro(41, (5, 100000)),
        'n_disparos': _inteiro(20000),
        'n_bootstrap': _inteiro(200, (200, 100000)),
        'T2_estrela_s': _real(39.7e-6),
        'f_ramsey_Hz': _real(0.1e6),
        'pontos_tempo': _inteiro(101, (10, 100000)),
        'f_ef_Hz': _real(3.7e9),
        'temperatura_ef_K': _real(0.059),
        'sigma_nuvem': _real(0.5),
        'n_disparos_histograma': _inteiro(200000),
        'temperaturas_K': Campo('lista_real', [0.059, 0.08, 0.1, 0.15, 0.2], 'positivo'),
    },
}


def _interpretar_valor(texto):
    """Literal JSON quando possível, senão o texto cru"""
    try:
        return json.loads(texto)
    except json.JSONDecodeError:
        return texto


def aplicar_sobrescritas(config, sobrescritas):
    """Aplica entradas 'secao.chave=valor' sobre o dicionário lido do arquivo"""
    config = copy.deepcopy(config)
    malformadas = []
    for entrada in sobrescritas or []:
        caminho, separador, valor = entrada.partition('=')
        secao, ponto, chave = caminho.strip().partition('.')
        if not separador or not ponto or not secao or not chave:
            malformadas.append(entrada)
            continue
        destino = config.setdefault(secao, {})
        if not isinstance(destino, dict):
            malformadas.append(entrada)
            continue
        destino[chave] = _interpretar_valor(valor.strip())
    if malformadas:
        raise ErroConfiguracao(
            f"Sobrescritas malformadas (use secao.chave=valor): {', '.join(malformadas)}",
            campos=malformadas,
        )
    return config


def _numero(valor):
    return isinstance(valor, (int, float)) and not isinstance(valor, bool)


def _validar_valor(campo, valor):
    """Retorna (valor normalizado, problema ou None)"""
    if valor is None:
        return None, None
    if campo.tipo == 'bool':
        return (valor, None) if isinstance(valor, bool) else (None, 'deve ser booleano')
    if campo.tipo == 'texto':
        return (valor, None) if isinstance(valor, str) else (None, 'deve ser texto')
    if campo.tipo == 'lista_real':
        if not isinstance(valor, list) or not all(_numero(v) for v in valor):
            return None, 'deve ser lista de números'
        valores = [float(v) for v in valor]
        if campo.restricao == 'positivo' and any(v <= 0 for v in valores):
            return None, 'deve conter apenas valores positivos'
        return valores, None
    if campo.tipo == 'inteiro':
        if isinstance(valor, float) and valor.is_integer():
            valor = int(valor)
        if not _numero(valor) or not isinstance(valor, int):
            return None, 'deve ser inteiro'
    elif campo.tipo == 'real':
        if not _numero(valor) or valor != valor or valor in (float('inf'), float('-inf')):
            return None, 'deve ser número finito'
        valor = float(valor)

    if campo.restricao == 'positivo' and not valor > 0:
        return None, 'deve ser positivo'
    if campo.restricao == 'nao_negativo' and valor < 0:
        return None, 'não pode ser negativo'
    if isinstance(campo.restricao, tuple):
        minimo, maximo = campo.restricao
        if not minimo <= valor <= maximo:
            return None, f'deve estar em [{minimo}, {maximo}]'
    return valor, None


def validar_config(config):
    """Confere o dicionário contra o ESQUEMA e preenche os padrões

    Todos os problemas são reunidos num único ErroConfiguracao cujos campos
    são os caminhos pontuados (circuito.E_C_Hz).
    """
    if not isinstance(config, dict):
        raise ErroConfiguracao("A configuração deve ser um objeto JSON", campos=['<raiz>'])

    problemas = {}
    for secao, valores in config.items():
        if secao not in ESQUEMA:
            problemas[secao] = 'seção desconhecida'
        elif not isinstance(valores, dict):
            problemas[secao] = 'seção deve ser um objeto'
        else:
            for chave in valores:
                if chave not in ESQUEMA[secao]:
                    problemas[f"{secao}.{chave}"] = 'chave desconhecida'

    normalizada = {}
    for secao, campos in ESQUEMA.items():
        valores = config.get(secao, {})
        if not isinstance(valores, dict):
            valores = {}
        normalizada[secao] = {}
        for chave, campo in campos.items():
            caminho = f"{secao}.{chave}"
            if chave not in valores:
                if campo.padrao is OBRIGATORIO:
                    problemas[caminho] = 'campo obrigatório ausente'
                    continue
                normalizada[secao][chave] = copy.deepcopy(campo.padrao)
                continue
            valor, problema = _validar_valor(campo, valores[chave])
            if problema:
                problemas[caminho] = problema
            elif valor is None and campo.padrao is OBRIGATORIO:
                problemas[caminho] = 'campo obrigatório ausente'
            else:
                normalizada[secao][chave] = valor

    if problemas:
        detalhes = '; '.join(f"{caminho}: {motivo}" for caminho, motivo in problemas.items())
        raise ErroConfiguracao(f"Configuração inválida: {detalhes}", campos=list(problemas))
    return normalizada


def carregar_config(caminho, sobrescritas=None, semente=None):
    """Lê o JSON, aplica sobrescritas e a semente da linha de comando, valida

    Returns:
        dict normalizado com todas as seções e padrões preenchidos
    """
    caminho = Path(caminho)
    try:
        texto = caminho.read_text(encoding='utf-8')
    except OSError as e:
        raise ErroConfiguracao(f"Não foi possível ler {caminho}: {e}", campos=['--config']) from e
    try:
        bruto = json.loads(texto)
    except json.JSONDecodeError as e:
        raise ErroConfiguracao(f"JSON inválido em {caminho}: {e}", campos=['--config']) from e

    bruto = aplicar_sobrescritas(bruto, sobrescritas)
    if semente is not None:
        bruto = aplicar_sobrescritas(bruto, [f"execucao.semente={int(semente)}"])
    config = validar_config(bruto)
    logger.info("Configuração %s carregada (hash %s)", caminho.name, hash_config(config)[:12])
    return config


def hash_config(config):
    """SHA-256 do JSON canônico da configuração normalizada"""
    canonico = json.dumps(config, sort_keys=True, separators=(',', ':'), ensure_ascii=True,
                          allow_nan=False)
    return hashlib.sha256(canonico.encode('utf-8')).hexdigest()
